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
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "sume/orb/transport.hpp"

namespace sume::gateway {

struct GatewayOptions {
    /// The videoserver to drive.
    orb::Endpoint server{"127.0.0.1", 7410};
    /// Token presented to the videoserver.
    std::string server_token;
    /// Bearer token HTTP clients must present; empty disables auth.
    std::string token;
    std::string cors_origin = "*";
    /// Optional static asset bundle served at "/".
    std::filesystem::path static_dir;
    /// Upper bound on pushed updates per second on /api/events.
    int max_updates_per_second = 20;
    std::function<void(const std::string&)> log;
};

class GatewayCore;

/// HTTP facade over one client session with the videoserver. Reads are
/// answered from the server; control verbs are serialized through the
/// session in arrival order.
class Gateway {
public:
    explicit Gateway(GatewayOptions options);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Binds the HTTP listener (port 0 picks a free port) and serves in a
    /// background thread. Returns the bound port. Throws std::runtime_error.
    std::uint16_t start(const std::string& host, std::uint16_t port);

    /// Stops serving, ends event streams and closes the upstream session.
    void stop();

    /// True while the upstream session is connected.
    bool upstream_connected() const;

private:
    std::shared_ptr<GatewayCore> core_;
};

/// Builds the wall document pushed to clients from a scene JSON text:
/// the scene itself plus a "shows" array with per-slideshow metadata.
std::string wall_state_doc(const std::string& scene_json);

}  // namespace sume::gateway
