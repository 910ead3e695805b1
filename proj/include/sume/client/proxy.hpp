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

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "sume/orb/session.hpp"

namespace sume::client {

/// A counted reference to one remote object. Copies share the reference;
/// the last copy releases it without waiting for the server. A default
/// constructed proxy (or one made from a NULL reply) is empty.
class Proxy {
public:
    Proxy() = default;
    Proxy(std::shared_ptr<orb::Session> session, orb::ObjectRef ref);

    bool valid() const { return state_ != nullptr; }
    explicit operator bool() const { return valid(); }

    /// Throw std::logic_error on an empty proxy.
    const orb::ObjectRef& ref() const;
    const std::shared_ptr<orb::Session>& session() const;
    const std::string& interface_name() const { return ref().interface_name; }

    orb::WireValue call(std::uint32_t disp_id, std::vector<orb::WireValue> args = {}) const;
    /// For members returning an interface; NULL becomes an empty proxy.
    Proxy call_object(std::uint32_t disp_id, std::vector<orb::WireValue> args = {}) const;
    orb::Subscription subscribe(std::string_view event, orb::EventHandler handler) const;

    /// Drops this copy; the last copy releases synchronously. The proxy
    /// becomes empty.
    void release();

private:
    struct State;
    std::shared_ptr<State> state_;
};

Proxy activate(const std::shared_ptr<orb::Session>& session, std::string_view prog_id);

/// Throws ComException(E_TYPE_MISMATCH) unless the reply holds an OBJREF or NULL.
Proxy to_proxy(const std::shared_ptr<orb::Session>& session, const orb::WireValue& value);

/// Late-bound access by member name, resolving dispatch ids once per name.
class Dispatch {
public:
    Dispatch() = default;
    explicit Dispatch(Proxy proxy) : proxy_(std::move(proxy)) {}

    const Proxy& proxy() const { return proxy_; }
    std::uint32_t dispid(std::string_view member);
    orb::WireValue invoke(std::string_view member, std::vector<orb::WireValue> args = {});
    Dispatch invoke_object(std::string_view member, std::vector<orb::WireValue> args = {});
    orb::WireValue get(std::string_view property) { return invoke("get_" + std::string(property)); }
    void put(std::string_view property, orb::WireValue value) {
        invoke("set_" + std::string(property), {std::move(value)});
    }

private:
    Proxy proxy_;
    std::map<std::string, std::uint32_t, std::less<>> ids_;
};

[[noreturn]] void wire_type_error(orb::Tag expected, const orb::WireValue& got);
void expect_arity(const std::vector<orb::WireValue>& args, std::size_t n);

inline orb::WireValue to_wire(bool v) { return orb::WireValue::boolean(v); }
inline orb::WireValue to_wire(std::int16_t v) { return orb::WireValue::i2(v); }
inline orb::WireValue to_wire(std::int32_t v) { return orb::WireValue::i4(v); }
inline orb::WireValue to_wire(std::int64_t v) { return orb::WireValue::i8(v); }
inline orb::WireValue to_wire(float v) { return orb::WireValue::r4(v); }
inline orb::WireValue to_wire(double v) { return orb::WireValue::r8(v); }
inline orb::WireValue to_wire(const std::string& v) { return orb::WireValue::string(v); }
inline orb::WireValue to_wire(const char* v) { return orb::WireValue::string(v); }
/// An empty proxy travels as NULL.
orb::WireValue to_wire(const Proxy& p);

template <typename T>
T from_wire(const orb::WireValue& v) {
    using orb::Tag;
    auto require = [&](Tag tag) {
        if (v.tag() != tag) wire_type_error(tag, v);
    };
    if constexpr (std::is_same_v<T, bool>) {
        require(Tag::Bool);
        return v.as_bool();
    } else if constexpr (std::is_same_v<T, std::int16_t>) {
        require(Tag::I2);
        return v.as_i2();
    } else if constexpr (std::is_same_v<T, std::int32_t>) {
        require(Tag::I4);
        return v.as_i4();
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
        require(Tag::I8);
        return v.as_i8();
    } else if constexpr (std::is_same_v<T, float>) {
        require(Tag::R4);
        return v.as_r4();
    } else if constexpr (std::is_same_v<T, double>) {
        require(Tag::R8);
        return v.as_r8();
    } else if constexpr (std::is_same_v<T, std::string>) {
        require(Tag::String);
        return v.as_string();
    } else {
        static_assert(!sizeof(T), "unsupported wire type");
    }
}

}  // namespace sume::client
