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

#include <atomic>
#include <concepts>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "sume/orb/fault.hpp"
#include "sume/orb/wire_value.hpp"

namespace sume::orb {

class Component;
using ComponentPtr = std::shared_ptr<Component>;

/// What a member handler returns: plain data, or a component to hand out
/// as an object reference. A null component travels as NULL.
class Reply {
public:
    Reply() = default;
    Reply(WireValue value) : value_(std::move(value)) {}
    Reply(ComponentPtr object) : is_object_(true), object_(std::move(object)) {}
    template <std::derived_from<Component> T>
    Reply(std::shared_ptr<T> object) : Reply(ComponentPtr(std::move(object))) {}

    bool is_object() const { return is_object_; }
    const WireValue& value() const { return value_; }
    const ComponentPtr& object() const { return object_; }

private:
    WireValue value_;
    bool is_object_ = false;
    ComponentPtr object_;
};

/// Arguments of one call, already checked against the member signature.
/// Interface-typed arguments are resolved to the caller's objects.
class CallArgs {
public:
    CallArgs() = default;
    CallArgs(std::vector<WireValue> values, std::vector<ComponentPtr> objects)
        : values_(std::move(values)), objects_(std::move(objects)) {}

    std::size_t size() const { return values_.size(); }
    const WireValue& operator[](std::size_t i) const { return values_.at(i); }

    bool boolean(std::size_t i) const { return values_.at(i).as_bool(); }
    std::int16_t i2(std::size_t i) const { return values_.at(i).as_i2(); }
    std::int32_t i4(std::size_t i) const { return values_.at(i).as_i4(); }
    std::int64_t i8(std::size_t i) const { return values_.at(i).as_i8(); }
    float r4(std::size_t i) const { return values_.at(i).as_r4(); }
    double r8(std::size_t i) const { return values_.at(i).as_r8(); }
    const std::string& str(std::size_t i) const { return values_.at(i).as_string(); }
    /// nullptr when the caller passed NULL.
    const ComponentPtr& object(std::size_t i) const { return objects_.at(i); }

    template <std::derived_from<Component> T>
    std::shared_ptr<T> object_as(std::size_t i) const {
        return std::dynamic_pointer_cast<T>(objects_.at(i));
    }

private:
    std::vector<WireValue> values_;
    std::vector<ComponentPtr> objects_;
};

using Handler = std::function<Reply(const CallArgs&)>;

/// Receives events raised by components; implemented by the server.
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void deliver(const Component& source, std::string_view event, const std::vector<WireValue>& args) = 0;
};

/// Base of every server-side object. Subclasses bind a handler per
/// dispatch name (get_X / set_X for properties) in their constructor.
class Component : public std::enable_shared_from_this<Component> {
public:
    explicit Component(std::string interface_name);
    virtual ~Component() = default;

    Component(const Component&) = delete;
    Component& operator=(const Component&) = delete;

    const std::string& interface_name() const { return interface_name_; }

    /// Process-wide unique, never reused.
    std::uint64_t instance_id() const { return instance_id_; }

    bool alive() const { return alive_.load(); }

    /// Makes the object unreachable; calls through existing references then
    /// fault with E_OBJECT_NOT_FOUND.
    void retire() { alive_.store(false); }

    /// Runs when the last remote reference across all connections goes away.
    virtual void on_final_release() {}

    const Handler* find_handler(std::string_view member) const;
    std::vector<std::string> bound_members() const;

    void attach(const std::shared_ptr<EventSink>& sink);

protected:
    void bind(std::string member, Handler handler);

    /// Delivers to every subscriber of `event` on this object; no-op when
    /// the object was never handed out.
    void raise(std::string_view event, std::vector<WireValue> args);

private:
    std::string interface_name_;
    std::uint64_t instance_id_;
    std::atomic<bool> alive_{true};
    std::map<std::string, Handler, std::less<>> handlers_;
    mutable std::mutex sink_mu_;
    std::weak_ptr<EventSink> sink_;
};

}  // namespace sume::orb
