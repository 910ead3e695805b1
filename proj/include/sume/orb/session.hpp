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

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sume/orb/fault.hpp"
#include "sume/orb/transport.hpp"
#include "sume/orb/wire_value.hpp"

namespace sume::orb {

struct SessionOptions {
    std::string token;
    std::chrono::milliseconds call_timeout{30000};
    std::chrono::milliseconds connect_timeout{5000};
};

using EventHandler = std::function<void(const std::vector<WireValue>& args)>;

class Session;

/// Keeps an event subscription alive; unsubscribes on destruction.
class Subscription {
public:
    Subscription() = default;
    ~Subscription() { cancel(); }

    Subscription(Subscription&& other) noexcept { *this = std::move(other); }
    Subscription& operator=(Subscription&& other) noexcept;

    std::uint32_t disp_id() const { return disp_id_; }
    bool active() const { return token_ != 0; }

    /// Best effort; never throws.
    void cancel();

private:
    friend class Session;
    Subscription(std::weak_ptr<Session> session, std::uint64_t object_id, std::uint32_t disp_id, std::string event,
                 std::uint64_t token)
        : session_(std::move(session)),
          object_id_(object_id),
          disp_id_(disp_id),
          event_(std::move(event)),
          token_(token) {}

    std::weak_ptr<Session> session_;
    std::uint64_t object_id_ = 0;
    std::uint32_t disp_id_ = 0;
    std::string event_;
    std::uint64_t token_ = 0;
};

class SessionImpl;

/// Client end of one connection. Thread-safe: concurrent calls are matched
/// to replies by correlation id. Event handlers run on one dedicated thread,
/// in arrival order.
///
/// Calls throw ComException for faults from the server and TransportError
/// when the connection fails or a call times out.
class Session : public std::enable_shared_from_this<Session> {
public:
    static std::shared_ptr<Session> connect(const Endpoint& endpoint, SessionOptions options = {});
    static std::shared_ptr<Session> attach(std::unique_ptr<ByteStream> stream, SessionOptions options = {});

    ~Session();

    const std::string& server_name() const;
    std::uint16_t protocol_version() const;
    bool connected() const;

    ObjectRef activate(std::string_view prog_id);
    std::uint32_t get_dispid(const ObjectRef& ref, std::string_view member);
    WireValue invoke(const ObjectRef& ref, std::uint32_t disp_id, std::vector<WireValue> args = {});
    Subscription subscribe(const ObjectRef& ref, std::string_view event, EventHandler handler);
    /// Returns the session's remaining reference count on the object.
    std::uint32_t release(const ObjectRef& ref);
    /// Fire-and-forget release for destructors; errors are ignored.
    void release_async(std::uint64_t object_id);
    /// The server's reverse-generated type library as `.sidl` text.
    std::string reflect();
    std::chrono::microseconds ping();

    /// Sends BYE, waits briefly for the server to release this session's
    /// objects, and closes the stream. Idempotent.
    void close();

private:
    friend class Subscription;
    explicit Session(std::unique_ptr<SessionImpl> impl);
    void unsubscribe(std::uint64_t object_id, std::uint32_t disp_id, const std::string& event, std::uint64_t token);

    std::unique_ptr<SessionImpl> impl_;
};

}  // namespace sume::orb
