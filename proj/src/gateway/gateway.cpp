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

#include "sume/gateway/gateway.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sume/orb/fault.hpp"
#include "sume/orb/session.hpp"
#include "sume/proxies/presenter.hpp"

namespace sume::gateway {

namespace pp = sume::proxies::presenter;
using nlohmann::json;
using orb::ComException;
using orb::TransportError;

std::string wall_state_doc(const std::string& scene_json) {
    json doc = json::parse(scene_json);
    json shows = json::array();
    for (const auto& w : doc["windows"]) {
        if (w["kind"] != "slideshow") continue;
        const auto& c = w["content"];
        shows.push_back({{"window", w["id"]},
                         {"view", w["id"]},
                         {"deckTitle", c["deck"]},
                         {"slideCount", c["slideCount"]},
                         {"currentIndex", c["slideIndex"]}});
    }
    doc["shows"] = std::move(shows);
    return doc.dump();
}

namespace {

struct HttpError : std::runtime_error {
    HttpError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status(status), code(std::move(code)) {}
    int status;
    std::string code;
};

HttpError bad_request(const std::string& message) { return {400, "E_BAD_REQUEST", message}; }
HttpError not_found(const std::string& message) { return {404, "E_NOT_FOUND", message}; }

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
    send_json(res, status, {{"code", code}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        json body = json::parse(req.body);
        if (!body.is_object()) throw bad_request("request body must be a JSON object");
        return body;
    } catch (const json::parse_error& e) {
        throw bad_request(std::string("malformed JSON: ") + e.what());
    }
}

std::optional<std::int64_t> int_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) throw bad_request(std::string("\"") + key + "\" must be an integer");
    return it->get<std::int64_t>();
}

std::int32_t path_id(const httplib::Request& req) {
    const std::string text = req.matches[1];
    if (text.size() > 9) throw not_found("unknown window " + text);
    return static_cast<std::int32_t>(std::stol(text));
}

const json* find_window(const json& scene, std::int64_t id) {
    for (const auto& w : scene["windows"]) {
        if (w["id"].get<std::int64_t>() == id) return &w;
    }
    return nullptr;
}

const json& require_window(const json& scene, std::int32_t id) {
    const json* w = find_window(scene, id);
    if (w == nullptr) throw not_found("unknown window " + std::to_string(id));
    return *w;
}

std::int32_t to_i32(std::int64_t v, const char* key) {
    if (v < INT32_MIN || v > INT32_MAX) throw bad_request(std::string("\"") + key + "\" out of range");
    return static_cast<std::int32_t>(v);
}

}  // namespace

class GatewayCore : public std::enable_shared_from_this<GatewayCore> {
public:
    explicit GatewayCore(GatewayOptions options) : opt_(std::move(options)) {}

    std::uint16_t start(const std::string& host, std::uint16_t port);
    void stop();
    bool connected() const {
        std::lock_guard lock(up_mu_);
        return session_ && session_->connected();
    }

private:
    struct Upstream {
        std::shared_ptr<orb::Session> session;
        pp::Wall wall;
    };
    // A show launched through the gateway; its objects live in our session.
    struct Show {
        pp::Application app;
        pp::SlideShowView view;
    };

    void log(const std::string& line) const {
        if (opt_.log) opt_.log(line);
    }
    void routes();
    Upstream upstream();
    void drop_upstream();
    void mark_dirty();
    void pusher();
    void prune_shows(const json& scene);
    void guarded(httplib::Response& res, const std::function<void()>& fn);

    void get_wall(httplib::Response& res);
    void get_decks(httplib::Response& res);
    void post_show(const httplib::Request& req, httplib::Response& res);
    void patch_window(const httplib::Request& req, httplib::Response& res);
    void post_view(const httplib::Request& req, httplib::Response& res);
    void delete_show(const httplib::Request& req, httplib::Response& res);
    void get_events(httplib::Response& res);

    GatewayOptions opt_;
    httplib::Server http_;
    std::thread http_thread_;
    std::thread pusher_thread_;
    std::atomic<bool> stopping_{false};
    bool started_ = false;

    mutable std::mutex up_mu_;
    std::shared_ptr<orb::Session> session_;
    pp::Wall wall_;
    orb::Subscription revision_sub_;
    orb::Subscription slide_sub_;
    std::uint64_t generation_ = 0;

    std::mutex control_mu_;
    std::map<std::int32_t, Show> shows_;
    std::uint64_t shows_generation_ = 0;

    std::mutex pub_mu_;
    std::condition_variable pub_cv_;
    bool dirty_ = true;
    std::uint64_t seq_ = 0;
    std::uint64_t published_generation_ = 0;
    std::int64_t published_revision_ = -1;
    std::string published_doc_;
};

GatewayCore::Upstream GatewayCore::upstream() {
    std::lock_guard lock(up_mu_);
    if (session_ && session_->connected()) return {session_, wall_};
    revision_sub_.cancel();
    slide_sub_.cancel();
    wall_ = {};
    if (session_) session_->close();
    session_.reset();

    orb::SessionOptions so;
    so.token = opt_.server_token;
    so.connect_timeout = std::chrono::seconds(2);
    so.call_timeout = std::chrono::seconds(10);
    auto session = orb::Session::connect(opt_.server, so);
    auto wall = pp::WallControl::Create(session);
    std::weak_ptr<GatewayCore> weak = weak_from_this();
    auto poke = [weak] {
        if (auto self = weak.lock()) self->mark_dirty();
    };
    revision_sub_ = wall.subscribe_RevisionChanged([poke](std::int32_t) { poke(); });
    slide_sub_ = wall.subscribe_SlideChanged([poke](std::int32_t, std::int32_t) { poke(); });
    session_ = session;
    wall_ = wall;
    ++generation_;
    log("connected to " + opt_.server.to_string() + " (" + session->server_name() + ")");
    mark_dirty();
    return {session_, wall_};
}

void GatewayCore::drop_upstream() {
    std::lock_guard lock(up_mu_);
    if (session_ && !stopping_) log("lost connection to " + opt_.server.to_string());
    revision_sub_.cancel();
    slide_sub_.cancel();
    wall_ = {};
    if (session_) session_->close();
    session_.reset();
}

void GatewayCore::mark_dirty() {
    {
        std::lock_guard lock(pub_mu_);
        dirty_ = true;
    }
    pub_cv_.notify_all();
}

void GatewayCore::guarded(httplib::Response& res, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const HttpError& e) {
        send_error(res, e.status, e.code, e.what());
    } catch (const ComException& e) {
        send_error(res, 409, orb::fault_name(e.code()), e.what());
    } catch (const TransportError& e) {
        drop_upstream();
        send_error(res, 502, "E_CONNECTION", e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, "E_INTERNAL", e.what());
    }
}

void GatewayCore::get_wall(httplib::Response& res) {
    auto up = upstream();
    res.set_content(wall_state_doc(up.wall.Snapshot()), "application/json");
}

void GatewayCore::get_decks(httplib::Response& res) {
    auto up = upstream();
    send_json(res, 200, json::parse(up.wall.ListDecks()));
}

void GatewayCore::post_show(const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    auto deck = body.find("deck");
    if (deck == body.end() || !deck->is_string() || deck->get<std::string>().empty()) {
        throw bad_request("\"deck\" must be a non-empty string");
    }
    auto x = int_field(body, "x"), y = int_field(body, "y"), w = int_field(body, "w"), h = int_field(body, "h");
    bool title_slide = true;
    if (auto it = body.find("titleSlide"); it != body.end()) {
        if (!it->is_boolean()) throw bad_request("\"titleSlide\" must be a boolean");
        title_slide = it->get<bool>();
    }

    std::lock_guard control(control_mu_);
    auto up = upstream();
    auto app = pp::PresenterApplication::Create(up.session);
    app.set_WindowState(pp::PpWindowState::ppWindowMinimized);
    app.set_Visible(1);
    auto presentations = app.get_Presentations();
    presentations.Open(deck->get<std::string>(), 0, 0, 0);
    auto presentation = presentations.Item(1);
    auto settings = presentation.get_SlideShowSettings();
    if (title_slide) presentation.get_Slides().Add(1, pp::PpSlideLayout::ppLayoutTitle);
    auto window = settings.Run();
    if (w) window.set_Width(static_cast<float>(*w));
    if (h) window.set_Height(static_cast<float>(*h));
    if (x) window.set_Left(static_cast<float>(*x));
    if (y) window.set_Top(static_cast<float>(*y));
    auto view = window.get_View();
    auto id = window.get_WindowId();
    json out = {{"window", id},
                {"view", id},
                {"slideIndex", view.get_CurrentSlideIndex()},
                {"objects",
                 {{"application", app.ref().id},
                  {"presentation", presentation.ref().id},
                  {"slideShowWindow", window.ref().id},
                  {"slideShowView", view.ref().id}}}};
    {
        std::lock_guard lock(up_mu_);
        if (shows_generation_ != generation_) {
            shows_.clear();
            shows_generation_ = generation_;
        }
    }
    shows_[id] = Show{app, view};
    send_json(res, 201, out);
}

void GatewayCore::patch_window(const httplib::Request& req, httplib::Response& res) {
    auto id = path_id(req);
    json body = parse_body(req);
    for (const auto& [key, value] : body.items()) {
        if (key != "x" && key != "y" && key != "w" && key != "h" && key != "z") {
            throw bad_request("unknown field \"" + key + "\"");
        }
    }
    auto x = int_field(body, "x"), y = int_field(body, "y"), w = int_field(body, "w"), h = int_field(body, "h"),
         z = int_field(body, "z");

    std::lock_guard control(control_mu_);
    auto up = upstream();
    json scene = json::parse(up.wall.Snapshot());
    const json& win = require_window(scene, id);
    if (x || y || w || h) {
        up.wall.SetWindowRect(id, to_i32(x.value_or(win["x"].get<std::int64_t>()), "x"),
                              to_i32(y.value_or(win["y"].get<std::int64_t>()), "y"),
                              to_i32(w.value_or(win["width"].get<std::int64_t>()), "w"),
                              to_i32(h.value_or(win["height"].get<std::int64_t>()), "h"));
    }
    if (z) up.wall.SetWindowZ(id, to_i32(*z, "z"));
    json after = json::parse(up.wall.Snapshot());
    json out = {{"revision", after["revision"]}};
    if (const json* now = find_window(after, id)) out["window"] = *now;
    send_json(res, 200, out);
}

void GatewayCore::post_view(const httplib::Request& req, httplib::Response& res) {
    auto id = path_id(req);
    const std::string verb = req.matches[2];
    json body = parse_body(req);
    std::optional<std::int64_t> index;
    if (verb == "goto") {
        index = int_field(body, "index");
        if (!index) throw bad_request("\"index\" is required");
    }

    std::lock_guard control(control_mu_);
    auto up = upstream();
    require_window(json::parse(up.wall.Snapshot()), id);
    if (verb == "next") {
        up.wall.NextSlide(id);
    } else if (verb == "prev") {
        up.wall.PreviousSlide(id);
    } else {
        up.wall.GotoSlide(id, to_i32(*index, "index"));
    }
    send_json(res, 200, {{"window", id}, {"view", id}, {"slideIndex", up.wall.GetSlideIndex(id)}});
}

void GatewayCore::delete_show(const httplib::Request& req, httplib::Response& res) {
    auto id = path_id(req);
    std::lock_guard control(control_mu_);
    auto up = upstream();
    require_window(json::parse(up.wall.Snapshot()), id);
    bool same_session;
    {
        std::lock_guard lock(up_mu_);
        same_session = shows_generation_ == generation_;
    }
    auto it = shows_.find(id);
    if (it != shows_.end() && same_session) {
        Show show = std::move(it->second);
        shows_.erase(it);
        show.view.Exit();
        show.app.Quit();
    } else {
        up.wall.CloseWindow(id);
    }
    res.status = 204;
}

void GatewayCore::get_events(httplib::Response& res) {
    // Per-stream cursor: publication sequence plus the (generation, revision)
    // last written, so a stream never goes backwards.
    struct Cursor {
        bool opened = false;
        std::uint64_t seq = 0;
        std::pair<std::uint64_t, std::int64_t> sent{0, -1};
    };
    auto cursor = std::make_shared<Cursor>();
    std::weak_ptr<GatewayCore> weak = weak_from_this();
    res.set_header("Cache-Control", "no-cache");
    res.set_header("X-Accel-Buffering", "no");
    res.set_chunked_content_provider("text/event-stream", [weak, cursor](std::size_t, httplib::DataSink& sink) {
        auto self = weak.lock();
        if (!self) return false;
        auto frame = [](std::int64_t revision, const std::string& doc) {
            return "id: " + std::to_string(revision) + "\nevent: wall\ndata: " + doc + "\n\n";
        };
        std::string chunk;
        if (!cursor->opened) {
            cursor->opened = true;
            try {
                auto up = self->upstream();
                std::uint64_t generation;
                {
                    std::lock_guard lock(self->up_mu_);
                    generation = self->generation_;
                }
                std::string scene = up.wall.Snapshot();
                auto revision = json::parse(scene)["revision"].get<std::int64_t>();
                cursor->sent = {generation, revision};
                chunk = frame(revision, wall_state_doc(scene));
                std::lock_guard lock(self->pub_mu_);
                cursor->seq = self->seq_;
            } catch (const std::exception&) {
                chunk.clear();
            }
            if (!chunk.empty()) return sink.write(chunk.data(), chunk.size());
        }
        {
            std::unique_lock lock(self->pub_mu_);
            self->pub_cv_.wait_for(lock, std::chrono::seconds(15),
                                   [&] { return self->stopping_.load() || self->seq_ > cursor->seq; });
            if (self->stopping_) return false;
            if (self->seq_ > cursor->seq) {
                cursor->seq = self->seq_;
                std::pair<std::uint64_t, std::int64_t> key{self->published_generation_, self->published_revision_};
                if (key > cursor->sent) {
                    cursor->sent = key;
                    chunk = frame(self->published_revision_, self->published_doc_);
                }
            } else {
                chunk = ": keepalive\n\n";
            }
        }
        if (chunk.empty()) return true;
        return sink.write(chunk.data(), chunk.size());
    });
}

void GatewayCore::prune_shows(const json& scene) {
    std::unique_lock control(control_mu_, std::try_to_lock);
    if (!control.owns_lock()) return;
    for (auto it = shows_.begin(); it != shows_.end();) {
        if (find_window(scene, it->first) != nullptr) {
            ++it;
            continue;
        }
        try {
            it->second.app.Quit();
        } catch (const std::exception&) {
        }
        it = shows_.erase(it);
    }
}

void GatewayCore::pusher() {
    using clock = std::chrono::steady_clock;
    const auto interval = std::chrono::milliseconds(1000 / std::max(1, opt_.max_updates_per_second));
    auto last_push = clock::now() - interval;
    while (!stopping_) {
        bool linked = connected();
        {
            std::unique_lock lock(pub_mu_);
            pub_cv_.wait_for(lock, std::chrono::seconds(1), [&] { return dirty_ || stopping_.load(); });
            if (stopping_) break;
            if (!dirty_ && linked) continue;
            // Coalesce: let a burst settle until the next slot, then fetch once.
            pub_cv_.wait_until(lock, last_push + interval, [&] { return stopping_.load(); });
            if (stopping_) break;
            dirty_ = false;
        }
        try {
            auto up = upstream();
            std::uint64_t generation;
            {
                std::lock_guard lock(up_mu_);
                generation = generation_;
            }
            std::string scene_text = up.wall.Snapshot();
            json scene = json::parse(scene_text);
            auto revision = scene["revision"].get<std::int64_t>();
            {
                std::lock_guard lock(pub_mu_);
                bool fresh_server = generation != published_generation_;
                if (fresh_server || revision > published_revision_) {
                    published_generation_ = generation;
                    published_revision_ = revision;
                    published_doc_ = wall_state_doc(scene_text);
                    ++seq_;
                    last_push = clock::now();
                }
            }
            pub_cv_.notify_all();
            prune_shows(scene);
        } catch (const TransportError&) {
            drop_upstream();
        } catch (const std::exception& e) {
            log(std::string("refresh failed: ") + e.what());
        }
    }
}

void GatewayCore::routes() {
    http_.new_task_queue = [] { return new httplib::ThreadPool(32); };
    http_.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", opt_.cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
        res.set_header("Access-Control-Max-Age", "600");
        if (req.method == "OPTIONS") {
            res.status = 204;
            return httplib::Server::HandlerResponse::Handled;
        }
        if (!opt_.token.empty() && req.path.rfind("/api/", 0) == 0) {
            bool ok = req.get_header_value("Authorization") == "Bearer " + opt_.token ||
                      (req.has_param("token") && req.get_param_value("token") == opt_.token);
            if (!ok) {
                send_error(res, 401, "E_UNAUTHORIZED", "missing or wrong bearer token");
                return httplib::Server::HandlerResponse::Handled;
            }
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });
    http_.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            send_error(res, res.status, res.status == 404 ? "E_NOT_FOUND" : "E_HTTP", httplib::status_message(res.status));
        }
    });
    http_.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
        log(req.method + " " + req.path + " " + std::to_string(res.status));
    });

    http_.Get("/api/wall", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { get_wall(res); });
    });
    http_.Get("/api/decks", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { get_decks(res); });
    });
    http_.Post("/api/shows", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { post_show(req, res); });
    });
    http_.Delete(R"(/api/shows/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { delete_show(req, res); });
    });
    http_.Patch(R"(/api/windows/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { patch_window(req, res); });
    });
    http_.Post(R"(/api/views/(\d+)/(next|prev|goto))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { post_view(req, res); });
    });
    http_.Get("/api/events", [this](const httplib::Request&, httplib::Response& res) { get_events(res); });
    if (!opt_.static_dir.empty()) http_.set_mount_point("/", opt_.static_dir.string());
}

std::uint16_t GatewayCore::start(const std::string& host, std::uint16_t port) {
    routes();
    int bound = port == 0 ? http_.bind_to_any_port(host) : (http_.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    started_ = true;
    http_thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
    pusher_thread_ = std::thread([this] { pusher(); });
    return static_cast<std::uint16_t>(bound);
}

void GatewayCore::stop() {
    if (stopping_.exchange(true)) return;
    pub_cv_.notify_all();
    if (started_) http_.stop();
    if (http_thread_.joinable()) http_thread_.join();
    if (pusher_thread_.joinable()) pusher_thread_.join();
    {
        std::lock_guard control(control_mu_);
        shows_.clear();
    }
    drop_upstream();
}

Gateway::Gateway(GatewayOptions options) : core_(std::make_shared<GatewayCore>(std::move(options))) {}

Gateway::~Gateway() { stop(); }

std::uint16_t Gateway::start(const std::string& host, std::uint16_t port) { return core_->start(host, port); }

void Gateway::stop() { core_->stop(); }

bool Gateway::upstream_connected() const { return core_->connected(); }

}  // namespace sume::gateway
