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

// sume-server: hosts the presenter components and the wall compositor.

#include <csignal>
#include <fstream>
#include <iostream>
#include <mutex>

#include <CLI11.hpp>

#include "sume/orb/protocol.hpp"
#include "sume/orb/server.hpp"
#include "sume/presenter/presenter.hpp"

int main(int argc, char** argv) {
    CLI::App app{"SUME videoserver"};
    std::string listen = "127.0.0.1:7410";
    std::string port_file, wall_file, token, name = "sume-server";
    std::string content_root = ".";
    bool verbose = false;
    app.add_option("--listen", listen, "host:port to accept connections on (port 0 picks one)");
    app.add_option("--port-file", port_file, "Write the bound port to this file");
    app.add_option("--wall", wall_file, "Wall config (JSON); default 2x2 screens of 1920x1080");
    app.add_option("--content-root", content_root, "Directory holding .deck files");
    app.add_option("--token", token, "Require this token from clients");
    app.add_option("--name", name, "Server name reported to clients");
    app.add_flag("-v,--verbose", verbose, "Log sessions and protocol errors to stderr");
    CLI11_PARSE(app, argc, argv);

    // Block termination signals before any thread starts; main waits on them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::signal(SIGPIPE, SIG_IGN);

    try {
        sume::wall::WallConfig cfg;
        if (wall_file.empty()) {
            cfg.rows = 2;
            cfg.cols = 2;
        } else {
            cfg = sume::wall::load_wall_config(wall_file);
        }
        auto wall = std::make_shared<sume::wall::WallModel>(cfg);
        auto host = std::make_shared<sume::presenter::PresenterHost>(wall, content_root);

        sume::orb::ServerOptions options;
        options.name = name;
        options.token = token;
        std::mutex log_mu;
        if (verbose) {
            options.log = [&log_mu](const std::string& line) {
                std::lock_guard lock(log_mu);
                std::cerr << "sume-server: " << line << "\n";
            };
        }
        sume::orb::Server server(sume::presenter::make_presenter_registry(host), options);
        auto endpoint = sume::orb::parse_endpoint(listen, sume::orb::kDefaultPort);
        auto listener = std::make_unique<sume::orb::TcpListener>(endpoint);
        auto port = listener->port();
        server.listen(std::move(listener));
        std::cerr << "sume-server: listening on " << endpoint.host << ":" << port << ", wall " << cfg.rows << "x"
                  << cfg.cols << " of " << cfg.screen_width << "x" << cfg.screen_height << "\n";
        if (!port_file.empty()) {
            std::ofstream(port_file + ".tmp") << port << "\n";
            std::rename((port_file + ".tmp").c_str(), port_file.c_str());
        }

        int sig = 0;
        sigwait(&signals, &sig);
        std::cerr << "sume-server: shutting down\n";
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << "sume-server: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
