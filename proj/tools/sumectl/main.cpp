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

// sumectl: command-line client for the SUME videoserver.

#include <atomic>
#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sume/orb/protocol.hpp"
#include "sume/proxies/presenter.hpp"
#include "sume/proxygen/proxygen.hpp"
#include "sume/typelib/typelib.hpp"
#include "sume/wall/base64.hpp"

namespace {

namespace fs = std::filesystem;
namespace pp = sume::proxies::presenter;
using sume::orb::ComException;
using sume::orb::TransportError;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConnection = 3;
constexpr int kExitFault = 4;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string server;
    std::string token;
    bool porcelain = false;
    double timeout = 30;
};

sigset_t g_signals;

// Waits for SIGINT/SIGTERM; a negative timeout waits forever. True if a
// signal arrived.
bool wait_for_signal(double seconds) {
    if (seconds < 0) {
        int sig = 0;
        sigwait(&g_signals, &sig);
        return true;
    }
    timespec ts{static_cast<time_t>(seconds), static_cast<long>((seconds - static_cast<time_t>(seconds)) * 1e9)};
    return sigtimedwait(&g_signals, nullptr, &ts) > 0;
}

std::shared_ptr<sume::orb::Session> connect(const Globals& g) {
    sume::orb::SessionOptions options;
    options.token = g.token;
    options.call_timeout = std::chrono::milliseconds(static_cast<long>(g.timeout * 1000));
    return sume::orb::Session::connect(sume::orb::parse_endpoint(g.server, sume::orb::kDefaultPort), options);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void emit_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

// Captures the wall and writes rev-<N>/screen-<i>.ppm plus scene.json.
fs::path write_capture(const pp::Wall& wall, const fs::path& dir) {
    std::string scene_text = wall.Capture();
    auto scene = nlohmann::json::parse(scene_text);
    int screens = scene["wall"]["rows"].get<int>() * scene["wall"]["cols"].get<int>();
    fs::path rev = dir / ("rev-" + std::to_string(scene["revision"].get<std::uint64_t>()));
    for (int i = 0; i < screens; ++i) {
        auto ppm = sume::wall::base64_decode(wall.ExportScreen(i));
        if (!ppm) throw std::runtime_error("server sent a malformed screen image");
        write_file(rev / ("screen-" + std::to_string(i) + ".ppm"),
                   std::string_view(reinterpret_cast<const char*>(ppm->data()), ppm->size()));
    }
    write_file(rev / "scene.json", scene_text);
    return rev;
}

// Topmost slideshow window when none was named.
std::int32_t pick_window(const pp::Wall& wall, std::int32_t requested) {
    if (requested > 0) return requested;
    auto scene = nlohmann::json::parse(wall.Snapshot());
    std::int32_t found = 0;
    for (const auto& w : scene["windows"]) {
        if (w["kind"] == "slideshow") found = w["id"].get<std::int32_t>();
    }
    if (found == 0) throw UsageError("no slideshow window on the wall; pass --window");
    return found;
}

struct ShowOptions {
    std::string deck;
    std::optional<float> x, y, w, h;
    int window_state = 2;
    bool add_title_slide = true;
    double dwell = -1;
    std::string snapshot_out;
};

int cmd_show(const Globals& g, const ShowOptions& o) {
    auto session = connect(g);
    auto app = pp::PresenterApplication::Create(session);
    app.set_WindowState(o.window_state);
    app.set_Visible(1);
    auto presentations = app.get_Presentations();
    presentations.Open(o.deck, 0, 0, 0);
    auto presentation = presentations.Item(1);
    auto settings = presentation.get_SlideShowSettings();
    if (o.add_title_slide) presentation.get_Slides().Add(1, pp::PpSlideLayout::ppLayoutTitle);
    auto window = settings.Run();
    if (o.w) window.set_Width(*o.w);
    if (o.h) window.set_Height(*o.h);
    if (o.x) window.set_Left(*o.x);
    if (o.y) window.set_Top(*o.y);
    auto view = window.get_View();
    auto window_id = window.get_WindowId();

    if (g.porcelain) {
        std::cout << "application\t" << app.ref().id << "\n"
                  << "presentation\t" << presentation.ref().id << "\n"
                  << "window\t" << window.ref().id << "\t" << window_id << "\n"
                  << "view\t" << view.ref().id << "\n";
    } else {
        std::cout << "Application #" << app.ref().id << ", Presentation #" << presentation.ref().id
                  << ", SlideShowWindow #" << window.ref().id << " (wall window " << window_id << "), SlideShowView #"
                  << view.ref().id << "\n"
                  << "rect " << window.get_Left() << "," << window.get_Top() << " " << window.get_Width() << "x"
                  << window.get_Height() << ", slide " << view.get_CurrentSlideIndex() << "\n";
    }
    if (!o.snapshot_out.empty()) {
        auto rev = write_capture(pp::WallControl::Create(session), o.snapshot_out);
        std::cout << (g.porcelain ? "snapshot\t" : "snapshot written to ") << rev.string() << "\n";
    }
    std::cout.flush();
    if (o.dwell != 0) {
        if (!g.porcelain && o.dwell < 0) std::cerr << "showing; press Ctrl-C to quit\n";
        wait_for_signal(o.dwell);
    }
    app.Quit();
    session->close();
    return kExitOk;
}

int cmd_navigate(const Globals& g, const std::string& verb, std::int32_t window, std::int32_t index) {
    auto session = connect(g);
    auto wall = pp::WallControl::Create(session);
    auto id = pick_window(wall, window);
    if (verb == "next") {
        wall.NextSlide(id);
    } else if (verb == "prev") {
        wall.PreviousSlide(id);
    } else if (verb == "goto") {
        wall.GotoSlide(id, index);
    } else {
        wall.CloseWindow(id);
        std::cout << (g.porcelain ? "closed\t" : "closed window ") << id << "\n";
        session->close();
        return kExitOk;
    }
    auto current = wall.GetSlideIndex(id);
    if (g.porcelain) {
        std::cout << id << "\t" << current << "\n";
    } else {
        std::cout << "window " << id << " at slide " << current << "\n";
    }
    session->close();
    return kExitOk;
}

int cmd_snapshot(const Globals& g, const std::string& out_dir) {
    auto session = connect(g);
    auto rev = write_capture(pp::WallControl::Create(session), out_dir);
    std::cout << rev.string() << "\n";
    session->close();
    return kExitOk;
}

int cmd_windows(const Globals& g) {
    auto session = connect(g);
    auto scene = nlohmann::json::parse(pp::WallControl::Create(session).Snapshot());
    session->close();
    if (!g.porcelain) std::cout << "revision " << scene["revision"] << "\n";
    for (const auto& w : scene["windows"]) {
        const auto& c = w["content"];
        if (g.porcelain) {
            std::cout << w["id"] << "\t" << w["kind"].get<std::string>() << "\t" << w["x"] << "\t" << w["y"] << "\t"
                      << w["width"] << "\t" << w["height"] << "\t" << w["z"] << "\t" << (w["visible"].get<bool>() ? 1 : 0)
                      << "\t" << c["slideIndex"] << "\t" << c["slideCount"] << "\t" << c["deck"].get<std::string>()
                      << "\n";
        } else {
            std::cout << "#" << w["id"] << " " << w["kind"].get<std::string>() << " " << w["x"] << "," << w["y"]
                      << " " << w["width"] << "x" << w["height"] << " z=" << w["z"]
                      << (w["visible"].get<bool>() ? "" : " hidden") << "  " << c["deck"].get<std::string>() << " "
                      << c["slideIndex"] << "/" << c["slideCount"] << "\n";
        }
    }
    return kExitOk;
}

int cmd_watch(const Globals& g, int count) {
    auto session = connect(g);
    auto wall = pp::WallControl::Create(session);
    std::mutex out_mu;
    std::atomic<int> seen{0};
    auto line = [&](const std::string& human, const std::string& porcelain) {
        std::lock_guard lock(out_mu);
        if (count > 0 && seen.load() >= count) return;
        std::cout << (g.porcelain ? porcelain : human) << std::endl;
        ++seen;
    };
    auto s1 = wall.subscribe_SlideChanged([&](std::int32_t window, std::int32_t index) {
        line("SlideChanged " + std::to_string(index) + " window " + std::to_string(window),
             "SlideChanged\t" + std::to_string(window) + "\t" + std::to_string(index));
    });
    auto s2 = wall.subscribe_RevisionChanged([&](std::int32_t revision) {
        line("RevisionChanged " + std::to_string(revision), "RevisionChanged\t" + std::to_string(revision));
    });
    if (!g.porcelain) std::cerr << "watching " << g.server << "; press Ctrl-C to stop\n";
    {
        std::lock_guard lock(out_mu);
        std::cout << "ready" << std::endl;
    }
    while (count <= 0 || seen.load() < count) {
        if (wait_for_signal(0.1)) break;
        if (!session->connected()) throw TransportError("connection lost");
    }
    s1.cancel();
    s2.cancel();
    session->close();
    return kExitOk;
}

int cmd_tlb_gen(const std::string& input, const std::string& out, const std::string& cpp_out,
                const std::string& ts_out) {
    auto parsed = sume::typelib::parse_idl(read_file(input));
    if (!parsed.ok()) {
        for (const auto& d : parsed.diagnostics) std::cerr << input << ":" << d.to_string() << "\n";
        return kExitError;
    }
    auto manifest = sume::proxygen::generate_manifest(*parsed.library);
    emit_output(out, sume::proxygen::to_json(manifest));
    auto stubs = sume::proxygen::emit_stub_hooks(manifest);
    if (!cpp_out.empty()) write_file(cpp_out, sume::proxygen::render_cpp(stubs));
    if (!ts_out.empty()) write_file(ts_out, sume::proxygen::render_typescript(stubs));
    return kExitOk;
}

int cmd_tlb_dump(const Globals& g, const std::string& out) {
    auto session = connect(g);
    auto idl = session->reflect();
    session->close();
    emit_output(out, idl);
    return kExitOk;
}

int cmd_ping(const Globals& g) {
    auto session = connect(g);
    auto rtt = session->ping();
    if (g.porcelain) {
        std::cout << session->server_name() << "\t" << session->protocol_version() << "\t" << rtt.count() << "\n";
    } else {
        std::cout << session->server_name() << " (protocol " << session->protocol_version() << "): " << rtt.count()
                  << " us\n";
    }
    session->close();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    sigemptyset(&g_signals);
    sigaddset(&g_signals, SIGINT);
    sigaddset(&g_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &g_signals, nullptr);
    std::signal(SIGPIPE, SIG_IGN);

    Globals g;
    if (const char* env = std::getenv("SUME_ENDPOINT")) g.server = env;
    if (g.server.empty()) g.server = "127.0.0.1:" + std::to_string(sume::orb::kDefaultPort);
    if (const char* env = std::getenv("SUME_TOKEN")) g.token = env;

    CLI::App app{"Command-line client for the SUME videoserver"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("-s,--server", g.server, "Server endpoint host:port (default $SUME_ENDPOINT or 127.0.0.1:7410)");
    app.add_option("--token", g.token, "Access token (default $SUME_TOKEN)");
    app.add_flag("--porcelain", g.porcelain, "Tab-separated machine-readable output");
    app.add_option("--timeout", g.timeout, "Per-call timeout in seconds")->check(CLI::PositiveNumber);

    ShowOptions show;
    auto* show_cmd = app.add_subcommand("show", "Open a deck and run it as a slideshow window");
    show_cmd->set_help_flag("--help", "Print this help message and exit");
    show_cmd->add_option("deck", show.deck, "Deck file name under the server's content root")->required();
    show_cmd->add_option("--x", show.x, "Left edge in wall pixels");
    show_cmd->add_option("--y", show.y, "Top edge in wall pixels");
    show_cmd->add_option("--w", show.w, "Width in pixels");
    show_cmd->add_option("--h", show.h, "Height in pixels");
    show_cmd->add_option("--window-state", show.window_state, "Application WindowState (1 normal, 2 minimized, 3 maximized)");
    show_cmd->add_flag("!--no-title-slide", show.add_title_slide, "Do not insert a title slide before running");
    show_cmd->add_option("--dwell", show.dwell, "Seconds to keep the show up (default: until Ctrl-C)");
    show_cmd->add_option("--snapshot-out", show.snapshot_out, "Write a wall snapshot here once the show is placed");

    std::int32_t window = 0;
    std::int32_t index = 0;
    auto add_window = [&](CLI::App* c) { c->add_option("--window", window, "Wall window id (default: topmost slideshow)"); };
    auto* goto_cmd = app.add_subcommand("goto", "Jump to a slide");
    goto_cmd->add_option("index", index, "1-based slide index")->required();
    add_window(goto_cmd);
    auto* next_cmd = app.add_subcommand("next", "Advance one slide");
    add_window(next_cmd);
    auto* prev_cmd = app.add_subcommand("prev", "Go back one slide");
    add_window(prev_cmd);
    auto* exit_cmd = app.add_subcommand("exit", "End a slideshow and close its window");
    add_window(exit_cmd);

    std::string out_dir = "snapshots";
    auto* snapshot_cmd = app.add_subcommand("snapshot", "Write screen images and scene description");
    snapshot_cmd->add_option("-o,--out", out_dir, "Output directory (default: snapshots)");

    auto* windows_cmd = app.add_subcommand("windows", "List wall windows");

    int count = 0;
    auto* watch_cmd = app.add_subcommand("watch", "Stream slide and wall revision events");
    watch_cmd->add_option("--count", count, "Exit after this many events");

    auto* ping_cmd = app.add_subcommand("ping", "Measure a round trip");

    auto* tlb_cmd = app.add_subcommand("tlb", "Type library tools");
    tlb_cmd->require_subcommand(1);
    tlb_cmd->fallthrough();
    std::string tlb_input, tlb_out, tlb_cpp, tlb_ts;
    auto* gen_cmd = tlb_cmd->add_subcommand("gen", "Generate a proxy manifest from a .sidl file");
    gen_cmd->add_option("input", tlb_input, "Type library (.sidl)")->required();
    gen_cmd->add_option("-o,--out", tlb_out, "Manifest output (default: stdout)");
    gen_cmd->add_option("--cpp", tlb_cpp, "Also write C++ proxies");
    gen_cmd->add_option("--ts", tlb_ts, "Also write TypeScript proxies");
    auto* dump_cmd = tlb_cmd->add_subcommand("dump", "Reverse-generate the server's type library");
    dump_cmd->add_option("-o,--out", tlb_out, "IDL output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*show_cmd) return cmd_show(g, show);
        if (*goto_cmd) return cmd_navigate(g, "goto", window, index);
        if (*next_cmd) return cmd_navigate(g, "next", window, 0);
        if (*prev_cmd) return cmd_navigate(g, "prev", window, 0);
        if (*exit_cmd) return cmd_navigate(g, "exit", window, 0);
        if (*snapshot_cmd) return cmd_snapshot(g, out_dir);
        if (*windows_cmd) return cmd_windows(g);
        if (*watch_cmd) return cmd_watch(g, count);
        if (*ping_cmd) return cmd_ping(g);
        if (*gen_cmd) return cmd_tlb_gen(tlb_input, tlb_out, tlb_cpp, tlb_ts);
        if (*dump_cmd) return cmd_tlb_dump(g, tlb_out);
    } catch (const ComException& e) {
        std::cerr << "sumectl: " << sume::orb::fault_name(e.code()) << ": " << e.what() << "\n";
        return e.code() == sume::orb::FaultCode::AccessDenied ? kExitConnection : kExitFault;
    } catch (const TransportError& e) {
        std::cerr << "sumectl: connection error: " << e.what() << "\n";
        return kExitConnection;
    } catch (const UsageError& e) {
        std::cerr << "sumectl: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sumectl: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "sumectl: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
