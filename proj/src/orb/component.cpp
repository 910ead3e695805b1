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

#include "sume/orb/component.hpp"

namespace sume::orb {

namespace {
std::atomic<std::uint64_t> g_next_instance{1};
}

Component::Component(std::string interface_name)
    : interface_name_(std::move(interface_name)), instance_id_(g_next_instance.fetch_add(1)) {}

const Handler* Component::find_handler(std::string_view member) const {
    auto it = handlers_.find(member);
    return it == handlers_.end() ? nullptr : &it->second;
}

std::vector<std::string> Component::bound_members() const {
    std::vector<std::string> out;
    out.reserve(handlers_.size());
    for (const auto& [name, h] : handlers_) out.push_back(name);
    return out;
}

void Component::attach(const std::shared_ptr<EventSink>& sink) {
    std::lock_guard lock(sink_mu_);
    sink_ = sink;
}

void Component::bind(std::string member, Handler handler) { handlers_[std::move(member)] = std::move(handler); }

void Component::raise(std::string_view event, std::vector<WireValue> args) {
    std::shared_ptr<EventSink> sink;
    {
        std::lock_guard lock(sink_mu_);
        sink = sink_.lock();
    }
    if (sink) sink->deliver(*this, event, args);
}

}  // namespace sume::orb
