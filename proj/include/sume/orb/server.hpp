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
#include <thread>

#include "sume/orb/registry.hpp"
#include "sume/orb/transport.hpp"

namespace sume::orb {

struct ServerOptions {
    std::string name = "sume-server";
    /// Required bearer token; empty disables authentication.
    std::string token;
    /// A frame that has started must be complete within this time.
    std::chrono::milliseconds frame_deadline{5000};
    /// HELLO must be accepted within this time of connecting.
    std::chrono::milliseconds handshake_timeout{10000};
    /// A client that lets this much outbound data pile up is disconnected.
    std::size_t max_outbound_bytes = 64u * 1024u * 1024u;
    /// Optional diagnostics sink.
    std::function<void(const std::string&)> log;
};

struct ServerStats {
    std::size_t sessions = 0;
    /// Distinct component instances with at least one remote reference.
    std::size_t referenced_instances = 0;
    std::uint64_t frames = 0;
    std::uint64_t protocol_faults = 0;
};

class ServerCore;

/// Hosts a sealed registry. Every connection is a session with its own
/// object table; component calls from all sessions are serialized, and
/// within a session they run in request order.
class Server {
public:
    Server(std::shared_ptr<const Registry> registry, ServerOptions options = {});
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Starts accepting on `listener` in a background thread.
    void listen(std::unique_ptr<TcpListener> listener);

    /// Serves one already-connected stream (socketpair, serial line, ...).
    void attach(std::unique_ptr<ByteStream> stream);

    /// Closes the listener and every session, releasing all references, and
    /// waits for session threads to finish.
    void stop();

    ServerStats stats() const;

    /// Runs `fn` with component calls excluded, for in-process observers.
    void with_dispatch_lock(const std::function<void()>& fn);

private:
    std::shared_ptr<ServerCore> core_;
    std::unique_ptr<TcpListener> listener_;
    std::thread accept_thread_;
};

}  // namespace sume::orb
