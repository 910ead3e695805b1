/*
 * Copyright (C) 2026 The SUME Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sume/client/proxy.hpp"

#include <stdexcept>

namespace sume::client {

using orb::ComException;
using orb::FaultCode;
using orb::Tag;
using orb::WireValue;

struct Proxy::State {
    std::shared_ptr<orb::Session> session;
    orb::ObjectRef ref;
    bool released = false;

    State(std::shared_ptr<orb::Session> s, orb::ObjectRef r) : session(std::move(s)), ref(std::move(r)) {}
    State(const State&) = delete;
    State& operator=(const State&) = delete;
    ~State() {
        if (released || !session->connected()) return;
        try {
            session->release_async(ref.id);
        } catch (...) {
        }
    }
};

Proxy::Proxy(std::shared_ptr<orb::Session> session, orb::ObjectRef ref)
    : state_(std::make_shared<State>(std::move(session), std::move(ref))) {}

const orb::ObjectRef& Proxy::ref() const {
    if (!state_) throw std::logic_error("empty proxy");
    return state_->ref;
}

const std::shared_ptr<orb::Session>& Proxy::session() const {
    if (!state_) throw std::logic_error("empty proxy");
    return state_->session;
}

WireValue Proxy::call(std::uint32_t disp_id, std::vector<WireValue> args) const {
    return session()->invoke(ref(), disp_id, std::move(args));
}

Proxy Proxy::call_object(std::uint32_t disp_id, std::vector<WireValue> args) const {
    return to_proxy(session(), call(disp_id, std::move(args)));
}

orb::Subscription Proxy::subscribe(std::string_view event, orb::EventHandler handler) const {
    return session()->subscribe(ref(), event, std::move(handler));
}

void Proxy::release() {
    if (!state_) return;
    if (state_.use_count() == 1 && state_->session->connected()) {
        state_->released = true;
        state_->session->release(state_->ref);
    }
    state_.reset();
}

Proxy activate(const std::shared_ptr<orb::Session>& session, std::string_view prog_id) {
    return Proxy(session, session->activate(prog_id));
}

Proxy to_proxy(const std::shared_ptr<orb::Session>& session, const WireValue& value) {
    if (value.is_null()) return {};
    if (value.tag() != Tag::ObjRef) wire_type_error(Tag::ObjRef, value);
    return Proxy(session, value.as_objref());
}

WireValue to_wire(const Proxy& p) {
    return p.valid() ? WireValue::objref(p.ref()) : WireValue::null();
}

void wire_type_error(Tag expected, const WireValue& got) {
    throw ComException(FaultCode::TypeMismatch,
                       "expected " + std::string(orb::tag_name(expected)) + ", got " + std::string(orb::tag_name(got.tag())));
}

void expect_arity(const std::vector<WireValue>& args, std::size_t n) {
    if (args.size() != n) {
        throw ComException(FaultCode::TypeMismatch,
                           "expected " + std::to_string(n) + " event argument(s), got " + std::to_string(args.size()));
    }
}

std::uint32_t Dispatch::dispid(std::string_view member) {
    auto it = ids_.find(member);
    if (it != ids_.end()) return it->second;
    auto id = proxy_.session()->get_dispid(proxy_.ref(), member);
    ids_.emplace(std::string(member), id);
    return id;
}

WireValue Dispatch::invoke(std::string_view member, std::vector<WireValue> args) {
    return proxy_.call(dispid(member), std::move(args));
}

Dispatch Dispatch::invoke_object(std::string_view member, std::vector<WireValue> args) {
    return Dispatch(proxy_.call_object(dispid(member), std::move(args)));
}

}  // namespace sume::client
