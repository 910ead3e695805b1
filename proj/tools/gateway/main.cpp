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

// sume-gateway: HTTP and event-stream facade over a SUME videoserver.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include <CLI11.hpp>

#include "sume/gateway/gateway.hpp"
#include "sume/orb/protocol.hpp"

int main(int argc, char** argv) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::signal(SIGPIPE, SIG_IGN);

    std::string listen = "127.0.0.1:8080";
    std::string server;
    if (const char* env = std::getenv("SUME_ENDPOINT")) server = env;
    if (server.empty()) server = "127.0.0.1:" + std::to_string(sume::orb::kDefaultPort);
    sume::gateway::GatewayOptions options;
    if (const char* env = std::getenv("SUME_TOKEN")) options.server_token = env;
    std::string port_file;
    bool verbose = false;

    CLI::App app{"HTTP and event-stream gateway for the SUME videoserver"};
    app.add_option("--listen", listen, "HTTP listen address host:port (port 0 picks one)");
    app.add_option("--server", server, "Videoserver endpoint (default $SUME_ENDPOINT or 127.0.0.1:7410)");
    app.add_option("--token", options.token, "Bearer token HTTP clients must present");
    app.add_option("--server-token", options.server_token, "Token for the videoserver (default $SUME_TOKEN)");
    app.add_option("--cors-origin", options.cors_origin, "Access-Control-Allow-Origin value");
    app.add_option("--static", options.static_dir, "Serve a static asset bundle at /")->check(CLI::ExistingDirectory);
    app.add_option("--max-rate", options.max_updates_per_second, "Event stream updates per second")
        ->check(CLI::Range(1, 1000));
    app.add_option("--port-file", port_file, "Write the bound HTTP port here");
    app.add_flag("-v,--verbose", verbose, "Log requests");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::mutex log_mu;
    auto log = [&](const std::string& line) {
        std::lock_guard lock(log_mu);
        std::cerr << "sume-gateway: " << line << "\n";
    };
    if (verbose) options.log = log;

    try {
        options.server = sume::orb::parse_endpoint(server, sume::orb::kDefaultPort);
        auto http = sume::orb::parse_endpoint(listen, 8080);
        sume::gateway::Gateway gateway(options);
        auto port = gateway.start(http.host, http.port);
        if (!port_file.empty()) {
            std::filesystem::path tmp = port_file + ".tmp";
            std::ofstream(tmp) << port << "\n";
            std::filesystem::rename(tmp, port_file);
        }
        log("listening on http://" + http.host + ":" + std::to_string(port) + ", server " +
            options.server.to_string());
        int sig = 0;
        sigwait(&signals, &sig);
        log("shutting down");
        gateway.stop();
    } catch (const std::invalid_argument& e) {
        log(e.what());
        return 2;
    } catch (const std::exception& e) {
        log(e.what());
        return 1;
    }
    return 0;
}
