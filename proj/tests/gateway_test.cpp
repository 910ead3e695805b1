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

#include <gtest/gtest.h>

#include <atomic>
#include <functional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sume/gateway/gateway.hpp"
#include "sume/proxies/presenter.hpp"
#include "support/presenter_rig.hpp"

namespace {

using namespace sume;
using nlohmann::json;
using sume::testing::PresenterRig;
namespace pp = sume::proxies::presenter;
using std::chrono::milliseconds;

constexpr const char* kToken = "s3cret";

// Server-sent event reader; parses "wall" events into documents.
class EventStream {
public:
    struct Event {
        std::int64_t id = 0;
        json doc;
        std::chrono::steady_clock::time_point at;
    };

    EventStream(std::uint16_t port, std::string path) : client_("127.0.0.1", port) {
        client_.set_read_timeout(60, 0);
        thread_ = std::thread([this, path] {
            client_.Get(path, [this](const char* data, std::size_t len) {
                feed(std::string(data, len));
                return !stopped_.load();
            });
        });
    }
    ~EventStream() { stop(); }

    void stop() {
        stopped_ = true;
        client_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::vector<Event> events() {
        std::lock_guard lock(mu_);
        return events_;
    }

    template <typename Pred>
    bool wait_until(Pred pred, milliseconds timeout = milliseconds(5000)) {
        std::unique_lock lock(mu_);
        return cv_.wait_for(lock, timeout, [&] { return pred(events_); });
    }

private:
    void feed(const std::string& chunk) {
        std::lock_guard lock(mu_);
        buffer_ += chunk;
        for (auto end = buffer_.find("\n\n"); end != std::string::npos; end = buffer_.find("\n\n")) {
            std::string block = buffer_.substr(0, end);
            buffer_.erase(0, end + 2);
            Event ev;
            ev.at = std::chrono::steady_clock::now();
            bool has_data = false;
            std::size_t pos = 0;
            while (pos < block.size()) {
                auto nl = block.find('\n', pos);
                std::string line = block.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
                pos = nl == std::string::npos ? block.size() : nl + 1;
                if (line.rfind("id: ", 0) == 0) ev.id = std::stoll(line.substr(4));
                if (line.rfind("data: ", 0) == 0) {
                    ev.doc = json::parse(line.substr(6));
                    has_data = true;
                }
            }
            if (has_data) events_.push_back(std::move(ev));
        }
        cv_.notify_all();
    }

    httplib::Client client_;
    std::thread thread_;
    std::atomic<bool> stopped_{false};
    std::mutex mu_;
    std::condition_variable cv_;
    std::string buffer_;
    std::vector<Event> events_;
};

class GatewayTest : public ::testing::Test {
protected:
    void SetUp() override { start_gateway(); }

    void start_gateway(std::string token = kToken) {
        gateway::GatewayOptions options;
        options.server = {"127.0.0.1", server_port_};
        options.token = token;
        gateway_ = std::make_unique<gateway::Gateway>(options);
        port_ = gateway_->start("127.0.0.1", 0);
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
        client_->set_default_headers({{"Authorization", std::string("Bearer ") + kToken}});
        client_->set_read_timeout(20, 0);
    }

    httplib::Result post(const std::string& path, const json& body) {
        return client_->Post(path, body.dump(), "application/json");
    }
    httplib::Result patch(const std::string& path, const json& body) {
        return client_->Patch(path, body.dump(), "application/json");
    }
    json wall() {
        auto r = client_->Get("/api/wall");
        EXPECT_TRUE(r);
        EXPECT_EQ(r->status, 200);
        return json::parse(r->body);
    }
    int show(int x, int y, int w, int h, const std::string& deck = "presentation.deck") {
        auto r = post("/api/shows", {{"deck", deck}, {"x", x}, {"y", y}, {"w", w}, {"h", h}});
        EXPECT_TRUE(r);
        EXPECT_EQ(r->status, 201) << r->body;
        return json::parse(r->body)["window"].get<int>();
    }

    PresenterRig rig_;
    std::uint16_t server_port_ = rig_.listen_tcp();
    std::unique_ptr<gateway::Gateway> gateway_;
    std::uint16_t port_ = 0;
    std::unique_ptr<httplib::Client> client_;
};

const json* window_in(const json& doc, int id) {
    for (const auto& w : doc["windows"]) {
        if (w["id"] == id) return &w;
    }
    return nullptr;
}

TEST(WallStateDoc, AddsPerShowMetadata) {
    json scene = {{"revision", 4},
                  {"windows",
                   {{{"id", 1}, {"kind", "normal"}, {"content", {{"deck", ""}, {"slideCount", 0}, {"slideIndex", 0}}}},
                    {{"id", 2},
                     {"kind", "slideshow"},
                     {"content", {{"deck", "Quarterly"}, {"slideCount", 7}, {"slideIndex", 3}}}}}}};
    json doc = json::parse(gateway::wall_state_doc(scene.dump()));
    EXPECT_EQ(doc["revision"], 4);
    EXPECT_EQ(doc["windows"], scene["windows"]);
    ASSERT_EQ(doc["shows"].size(), 1u);
    EXPECT_EQ(doc["shows"][0],
              json({{"window", 2}, {"view", 2}, {"deckTitle", "Quarterly"}, {"slideCount", 7}, {"currentIndex", 3}}));
}

TEST_F(GatewayTest, ListingShowAppearsInWall) {
    auto r = post("/api/shows", {{"deck", "presentation.deck"}, {"x", 300}, {"y", 200}, {"w", 50}, {"h", 100}});
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 201) << r->body;
    json body = json::parse(r->body);
    int id = body["window"];
    EXPECT_EQ(body["view"], id);
    EXPECT_EQ(body["slideIndex"], 1);

    json doc = wall();
    const json* w = window_in(doc, id);
    ASSERT_NE(w, nullptr);
    EXPECT_EQ((*w)["x"], 300);
    EXPECT_EQ((*w)["y"], 200);
    EXPECT_EQ((*w)["width"], 50);
    EXPECT_EQ((*w)["height"], 100);
    EXPECT_EQ((*w)["kind"], "slideshow");
    ASSERT_EQ(doc["shows"].size(), 1u);
    EXPECT_EQ(doc["shows"][0]["currentIndex"], 1);
    EXPECT_EQ(doc["shows"][0]["deckTitle"], "Listing");
    // The listing inserts a title slide ahead of the deck's three.
    EXPECT_EQ(doc["shows"][0]["slideCount"], 4);

    auto scene = rig_.scene();
    ASSERT_EQ(scene.windows.size(), 1u);
    EXPECT_EQ(scene.windows[0].rect, (wall::Rect{300, 200, 50, 100}));
}

TEST_F(GatewayTest, TitleSlideCanBeSkipped) {
    auto r = post("/api/shows", {{"deck", "presentation.deck"}, {"titleSlide", false}});
    ASSERT_EQ(r->status, 201);
    EXPECT_EQ(wall()["shows"][0]["slideCount"], 3);
}

TEST_F(GatewayTest, UnknownIdsAre404) {
    std::vector<std::function<httplib::Result()>> calls = {
        [&] { return patch("/api/windows/77", {{"x", 1}}); },
        [&] { return client_->Post("/api/views/77/next"); },
        [&] { return post("/api/views/77/goto", {{"index", 1}}); },
        [&] { return client_->Delete("/api/shows/77"); },
        [&] { return client_->Delete("/api/shows/99999999999999"); },
    };
    for (auto& call : calls) {
        auto r = call();
        ASSERT_TRUE(r);
        EXPECT_EQ(r->status, 404) << r->body;
        EXPECT_EQ(json::parse(r->body)["code"], "E_NOT_FOUND");
    }
    EXPECT_EQ(json::parse(patch("/api/windows/77", {{"x", 1}})->body)["message"], "unknown window 77");
    auto r = client_->Get("/api/nothing");
    EXPECT_EQ(r->status, 404);
    EXPECT_EQ(json::parse(r->body)["code"], "E_NOT_FOUND");
}

TEST_F(GatewayTest, FaultsPassThroughAs409) {
    auto r = post("/api/shows", {{"deck", "missing.deck"}});
    ASSERT_EQ(r->status, 409);
    EXPECT_EQ(json::parse(r->body), json({{"code", "E_APP_FAULT"}, {"message", "file not found: missing.deck"}}));

    int id = show(0, 0, 100, 100);
    r = post("/api/views/" + std::to_string(id) + "/goto", {{"index", 42}});
    ASSERT_EQ(r->status, 409);
    EXPECT_EQ(json::parse(r->body)["message"], "index out of range");

    int other = show(200, 0, 100, 100);
    auto z = wall();
    int taken = (*window_in(z, other))["z"];
    r = patch("/api/windows/" + std::to_string(id), {{"z", taken}});
    ASSERT_EQ(r->status, 409);
    EXPECT_EQ(json::parse(r->body)["code"], "E_APP_FAULT");
}

TEST_F(GatewayTest, BadRequestsAre400) {
    int id = show(0, 0, 10, 10);
    auto path = "/api/windows/" + std::to_string(id);
    EXPECT_EQ(client_->Post("/api/shows", "{not json", "application/json")->status, 400);
    EXPECT_EQ(post("/api/shows", json::array())->status, 400);
    EXPECT_EQ(post("/api/shows", {{"x", 1}})->status, 400);
    EXPECT_EQ(post("/api/shows", {{"deck", "presentation.deck"}, {"x", "left"}})->status, 400);
    EXPECT_EQ(patch(path, {{"x", 1.5}})->status, 400);
    EXPECT_EQ(patch(path, {{"colour", 1}})->status, 400);
    EXPECT_EQ(patch(path, {{"x", 1LL << 40}})->status, 400);
    EXPECT_EQ(post("/api/views/" + std::to_string(id) + "/goto", json::object())->status, 400);
    auto r = patch(path, {{"x", "1"}});
    EXPECT_EQ(json::parse(r->body)["code"], "E_BAD_REQUEST");
}

TEST_F(GatewayTest, PatchUpdatesGeometryAndZ) {
    int a = show(0, 0, 100, 100);
    int b = show(50, 50, 100, 100);
    auto r = patch("/api/windows/" + std::to_string(a), {{"x", 1000}, {"h", 300}});
    ASSERT_EQ(r->status, 200) << r->body;
    json body = json::parse(r->body);
    EXPECT_EQ(body["window"]["x"], 1000);
    EXPECT_EQ(body["window"]["y"], 0);
    EXPECT_EQ(body["window"]["width"], 100);
    EXPECT_EQ(body["window"]["height"], 300);

    r = patch("/api/windows/" + std::to_string(b), {{"z", 50}});
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ((*window_in(wall(), b))["z"], 50);
    auto scene = rig_.scene();
    EXPECT_EQ(scene.find(a)->rect, (wall::Rect{1000, 0, 100, 300}));
}

TEST_F(GatewayTest, TransportVerbsDriveTheView) {
    int id = show(0, 0, 100, 100);
    auto base = "/api/views/" + std::to_string(id);
    auto step = [&](const std::string& verb, json body = json::object()) {
        auto r = post(base + "/" + verb, body);
        EXPECT_EQ(r->status, 200) << r->body;
        return json::parse(r->body)["slideIndex"].get<int>();
    };
    EXPECT_EQ(step("next"), 2);
    EXPECT_EQ(step("next"), 3);
    EXPECT_EQ(step("prev"), 2);
    EXPECT_EQ(step("goto", {{"index", 4}}), 4);
    EXPECT_EQ(step("next"), 4);
    EXPECT_EQ(wall()["shows"][0]["currentIndex"], 4);
}

TEST_F(GatewayTest, DeleteEndsGatewayAndExternalShows) {
    int mine = show(0, 0, 100, 100);

    auto session = orb::Session::connect({"127.0.0.1", server_port_});
    auto app = pp::PresenterApplication::Create(session);
    app.set_Visible(1);
    app.get_Presentations().Open("presentation.deck", 0, 0, 0);
    auto theirs = app.get_Presentations().Item(1).get_SlideShowSettings().Run().get_WindowId();
    ASSERT_EQ(wall()["windows"].size(), 2u);

    EXPECT_EQ(client_->Delete("/api/shows/" + std::to_string(mine))->status, 204);
    EXPECT_EQ(client_->Delete("/api/shows/" + std::to_string(theirs))->status, 204);
    EXPECT_EQ(wall()["windows"].size(), 0u);
    EXPECT_EQ(client_->Delete("/api/shows/" + std::to_string(mine))->status, 404);
    session->close();
}

TEST_F(GatewayTest, ExternallyClosedShowIsForgotten) {
    int id = show(0, 0, 100, 100);
    auto session = orb::Session::connect({"127.0.0.1", server_port_});
    pp::WallControl::Create(session).CloseWindow(id);
    EXPECT_EQ(client_->Delete("/api/shows/" + std::to_string(id))->status, 404);
    EXPECT_EQ(show(0, 0, 10, 10), id + 1);
    session->close();
}

TEST_F(GatewayTest, DecksListsContentRoot) {
    auto r = client_->Get("/api/decks");
    ASSERT_EQ(r->status, 200);
    json decks = json::parse(r->body);
    ASSERT_TRUE(decks.is_array());
    std::vector<std::string> files;
    for (const auto& d : decks) files.push_back(d["file"]);
    EXPECT_EQ(files, (std::vector<std::string>{"bad.deck", "empty.deck", "long.deck", "presentation.deck"}));
    EXPECT_EQ(decks[3]["slides"], 3);
    EXPECT_TRUE(decks[0].contains("error"));
}

TEST_F(GatewayTest, TokenIsRequired) {
    httplib::Client anon("127.0.0.1", port_);
    auto r = anon.Get("/api/wall");
    ASSERT_EQ(r->status, 401);
    EXPECT_EQ(json::parse(r->body)["code"], "E_UNAUTHORIZED");
    EXPECT_EQ(anon.Get("/api/wall", {{"Authorization", "Bearer wrong"}})->status, 401);
    EXPECT_EQ(anon.Get(std::string("/api/wall?token=") + kToken)->status, 200);
    EXPECT_EQ(anon.Post("/api/shows", R"({"deck":"presentation.deck"})", "application/json")->status, 401);
    EXPECT_EQ(rig_.scene().windows.size(), 0u);
}

TEST_F(GatewayTest, CorsPreflightAndHeaders) {
    httplib::Client anon("127.0.0.1", port_);
    auto r = anon.Options("/api/windows/1");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 204);
    EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
    EXPECT_NE(r->get_header_value("Access-Control-Allow-Methods").find("PATCH"), std::string::npos);
    EXPECT_NE(r->get_header_value("Access-Control-Allow-Headers").find("Authorization"), std::string::npos);
    EXPECT_EQ(client_->Get("/api/wall")->get_header_value("Access-Control-Allow-Origin"), "*");
    EXPECT_EQ(anon.Get("/api/wall")->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(GatewayTest, NoTokenMeansOpenAccess) {
    gateway_->stop();
    start_gateway("");
    httplib::Client anon("127.0.0.1", port_);
    EXPECT_EQ(anon.Get("/api/wall")->status, 200);
}

TEST_F(GatewayTest, EventStreamStartsWithCurrentState) {
    int id = show(300, 200, 50, 100);
    EventStream stream(port_, std::string("/api/events?token=") + kToken);
    ASSERT_TRUE(stream.wait_until([](const auto& evs) { return !evs.empty(); }));
    auto ev = stream.events().front();
    EXPECT_EQ(ev.doc, wall());
    EXPECT_EQ(ev.id, ev.doc["revision"].get<std::int64_t>());
    EXPECT_NE(window_in(ev.doc, id), nullptr);
}

TEST_F(GatewayTest, TwoRapidPatchesEndWithFinalState) {
    int id = show(0, 0, 100, 100);
    EventStream stream(port_, std::string("/api/events?token=") + kToken);
    ASSERT_TRUE(stream.wait_until([](const auto& evs) { return !evs.empty(); }));
    auto path = "/api/windows/" + std::to_string(id);
    ASSERT_EQ(patch(path, {{"x", 111}})->status, 200);
    ASSERT_EQ(patch(path, {{"x", 222}, {"y", 33}})->status, 200);
    ASSERT_TRUE(stream.wait_until([&](const auto& evs) {
        const json* w = window_in(evs.back().doc, id);
        return w != nullptr && (*w)["x"] == 222;
    }));
    auto evs = stream.events();
    const json* last = window_in(evs.back().doc, id);
    EXPECT_EQ((*last)["y"], 33);
    for (std::size_t i = 1; i < evs.size(); ++i) {
        EXPECT_GT(evs[i].doc["revision"].get<std::int64_t>(), evs[i - 1].doc["revision"].get<std::int64_t>());
    }
    EXPECT_GT(evs.back().doc["revision"].get<std::int64_t>(), evs.front().doc["revision"].get<std::int64_t>());
}

TEST_F(GatewayTest, BurstsAreCoalescedAndMonotonic) {
    int id = show(0, 0, 100, 100);
    EventStream stream(port_, std::string("/api/events?token=") + kToken);
    ASSERT_TRUE(stream.wait_until([](const auto& evs) { return !evs.empty(); }));

    // Steer directly through the server so the burst is faster than HTTP.
    auto session = orb::Session::connect({"127.0.0.1", server_port_});
    auto ctl = pp::WallControl::Create(session);
    auto start = std::chrono::steady_clock::now();
    const int moves = 300;
    for (int i = 1; i <= moves; ++i) ctl.SetWindowRect(id, i, 0, 100, 100);
    auto elapsed = std::chrono::steady_clock::now() - start;
    std::int64_t final_revision = json::parse(ctl.Snapshot())["revision"];
    ASSERT_TRUE(stream.wait_until(
        [&](const auto& evs) { return evs.back().doc["revision"].template get<std::int64_t>() == final_revision; }));
    std::this_thread::sleep_for(milliseconds(200));
    auto evs = stream.events();
    EXPECT_EQ((*window_in(evs.back().doc, id))["x"], moves);

    std::size_t pushed = evs.size() - 1;
    EXPECT_LT(pushed, static_cast<std::size_t>(moves));
    double seconds = std::chrono::duration<double>(elapsed).count() + 0.2;
    EXPECT_LE(static_cast<double>(pushed), seconds * 20 + 2) << "pushed " << pushed << " in " << seconds << " s";
    for (std::size_t i = 1; i < evs.size(); ++i) {
        EXPECT_GT(evs[i].id, evs[i - 1].id);
    }
    session->close();
}

TEST_F(GatewayTest, SlideChangesArePushed) {
    int id = show(0, 0, 100, 100);
    EventStream stream(port_, std::string("/api/events?token=") + kToken);
    ASSERT_TRUE(stream.wait_until([](const auto& evs) { return !evs.empty(); }));
    ASSERT_EQ(client_->Post("/api/views/" + std::to_string(id) + "/next")->status, 200);
    EXPECT_TRUE(stream.wait_until([](const auto& evs) {
        const json& shows = evs.back().doc["shows"];
        return shows.size() == 1 && shows[0]["currentIndex"] == 2;
    }));
}

TEST_F(GatewayTest, RestartLosesNoServerState) {
    auto session = orb::Session::connect({"127.0.0.1", server_port_});
    auto app = pp::PresenterApplication::Create(session);
    app.set_Visible(1);
    app.get_Presentations().Open("presentation.deck", 0, 0, 0);
    auto id = app.get_Presentations().Item(1).get_SlideShowSettings().Run().get_WindowId();
    pp::WallControl::Create(session).GotoSlide(id, 3);
    json before = wall();

    gateway_->stop();
    start_gateway();
    EXPECT_EQ(wall(), before);
    EXPECT_EQ(wall()["shows"][0]["currentIndex"], 3);
    session->close();
}

TEST_F(GatewayTest, GatewayShowsCloseWithItsSession) {
    show(0, 0, 100, 100);
    show(100, 0, 100, 100);
    ASSERT_EQ(rig_.scene().windows.size(), 2u);
    gateway_->stop();
    EXPECT_TRUE(rig_.eventually([&] { return rig_.scene().windows.empty(); }));
}

TEST(GatewayUpstream, UnreachableServerIs502) {
    std::uint16_t dead_port;
    {
        orb::TcpListener probe({"127.0.0.1", 0});
        dead_port = probe.port();
    }
    gateway::GatewayOptions options;
    options.server = {"127.0.0.1", dead_port};
    gateway::Gateway gw(options);
    auto port = gw.start("127.0.0.1", 0);
    httplib::Client client("127.0.0.1", port);
    auto r = client.Get("/api/wall");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 502);
    EXPECT_EQ(json::parse(r->body)["code"], "E_CONNECTION");
    EXPECT_FALSE(gw.upstream_connected());
}

}  // namespace
