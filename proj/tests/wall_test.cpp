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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "sume/wall/wall.hpp"
#include "support/wall_oracle.hpp"

namespace {

using namespace sume::wall;
using sume::testing::RandomWallGenerator;

WallConfig grid(int rows, int cols, int w, int h) {
    WallConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.screen_width = w;
    cfg.screen_height = h;
    return cfg;
}

WindowContent slide(std::string title, std::string body = {}, int layout = 2) {
    WindowContent c;
    c.type = WindowContent::Type::Slide;
    c.deck_title = "Deck";
    c.slide_index = 1;
    c.slide_count = 3;
    c.layout = layout;
    c.title = std::move(title);
    c.body = std::move(body);
    c.background = {20, 40, 120};
    return c;
}

// Topmost visible window per canvas pixel (0 = none), from first principles.
std::vector<std::uint32_t> owner_grid(const SceneSnapshot& s) {
    auto cw = s.config.canvas_width();
    auto ch = s.config.canvas_height();
    std::vector<std::uint32_t> owner(static_cast<std::size_t>(cw * ch), 0);
    std::map<std::uint32_t, std::int32_t> owner_z;
    for (std::int64_t y = 0; y < ch; ++y) {
        for (std::int64_t x = 0; x < cw; ++x) {
            std::uint32_t best = 0;
            std::int32_t best_z = 0;
            for (const auto& w : s.windows) {
                if (!w.visible || !w.rect.contains(x, y)) continue;
                if (best == 0 || w.z > best_z) {
                    best = w.id;
                    best_z = w.z;
                }
            }
            owner[static_cast<std::size_t>(y * cw + x)] = best;
        }
    }
    return owner;
}

void random_scene(WallModel& model, RandomWallGenerator& gen, int windows) {
    for (int i = 0; i < windows; ++i) {
        WindowContent c = gen.pick(0, 1) ? slide("T" + std::to_string(i), "a\nbb") : WindowContent{};
        auto id = model.place_window(gen.rect(model.config()), c);
        if (gen.pick(0, 5) == 0) model.set_visible(id, false);
    }
}

TEST(WallConfigTest, CanvasArithmetic) {
    WallConfig cfg = grid(2, 2, 1920, 1080);
    EXPECT_EQ(cfg.canvas_width(), 2 * 1920);
    EXPECT_EQ(cfg.canvas_height(), 2 * 1080);
    EXPECT_EQ(cfg.screen_count(), 4);
    EXPECT_EQ(cfg.screen_rect(3), (Rect{1920, 1080, 1920, 1080}));

    WallConfig single = grid(1, 1, 800, 600);
    EXPECT_EQ(single.canvas(), (Rect{0, 0, 800, 600}));

    EXPECT_THROW(WallModel(grid(0, 1, 10, 10)), std::invalid_argument);
    EXPECT_THROW(WallModel(grid(1, -1, 10, 10)), std::invalid_argument);
    EXPECT_THROW(WallModel(grid(1, 1, 0, 10)), std::invalid_argument);
}

TEST(WallConfigTest, ParsesConfigFiles) {
    auto cfg = parse_wall_config(R"({"rows":2,"cols":3,"screenWidth":640,"screenHeight":480,"background":"#102030"})");
    EXPECT_EQ(cfg, ([] {
                  WallConfig c = grid(2, 3, 640, 480);
                  c.background = {0x10, 0x20, 0x30};
                  return c;
              }()));
    EXPECT_THROW(parse_wall_config(R"({"rows":0,"cols":1,"screenWidth":1,"screenHeight":1})"), std::invalid_argument);
    EXPECT_THROW(parse_wall_config(R"({"rows":1,"cols":1,"screenWidth":1})"), std::invalid_argument);
    EXPECT_THROW(parse_wall_config(R"({"rows":1,"cols":1,"screenWidth":1,"screenHeight":1,"background":"red"})"),
                 std::invalid_argument);
    EXPECT_THROW(parse_wall_config("[1,2"), std::invalid_argument);
    EXPECT_EQ(Rgb::parse("#a0B1c2"), (Rgb{0xA0, 0xB1, 0xC2}));
    EXPECT_EQ((Rgb{1, 2, 255}).to_hex(), "#0102FF");
}

TEST(ClipTest, SeamExample) {
    auto pieces = clip_to_screens(grid(2, 2, 1920, 1080), {1800, 100, 240, 200});
    std::vector<ScreenPiece> expected{{0, {1800, 100, 120, 200}}, {1, {0, 100, 120, 200}}};
    EXPECT_EQ(pieces, expected);
}

TEST(ClipTest, InsideAndOffCanvas) {
    WallConfig cfg = grid(2, 2, 1920, 1080);
    EXPECT_EQ(clip_to_screens(cfg, {300, 200, 50, 100}), (std::vector<ScreenPiece>{{0, {300, 200, 50, 100}}}));
    EXPECT_TRUE(clip_to_screens(cfg, {-50, -50, 10, 10}).empty());
    EXPECT_TRUE(clip_to_screens(cfg, {3840, 0, 10, 10}).empty());
    EXPECT_TRUE(clip_to_screens(cfg, {10, 10, 0, 10}).empty());
    // Covers the whole canvas: one full screen each.
    auto all = clip_to_screens(cfg, {-5, -5, 4000, 3000});
    ASSERT_EQ(all.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(all[i], (ScreenPiece{i, {0, 0, 1920, 1080}}));
}

TEST(ClipTest, MatchesPixelOracleOnRandomWalls) {
    RandomWallGenerator gen(0x5eed);
    for (int i = 0; i < 1000; ++i) {
        WallConfig cfg = gen.config();
        Rect r = gen.rect(cfg);
        auto verdict = sume::testing::check_clip_by_pixels(cfg, r, clip_to_screens(cfg, r));
        ASSERT_EQ(verdict, "") << "case " << i << " rect (" << r.x << "," << r.y << "," << r.width << ","
                               << r.height << ")";
    }
}

TEST(ClipTest, SubtractLeavesExactlyTheDifference) {
    RandomWallGenerator gen(77);
    for (int i = 0; i < 500; ++i) {
        Rect a{gen.pick(-20, 20), gen.pick(-20, 20), gen.pick(0, 30), gen.pick(0, 30)};
        Rect b{gen.pick(-20, 20), gen.pick(-20, 20), gen.pick(0, 30), gen.pick(0, 30)};
        auto parts = subtract(a, b);
        ASSERT_LE(parts.size(), 4u);
        for (std::int64_t y = -25; y < 55; ++y) {
            for (std::int64_t x = -25; x < 55; ++x) {
                int covered = 0;
                for (const auto& p : parts) covered += p.contains(x, y) ? 1 : 0;
                bool want = a.contains(x, y) && !b.contains(x, y);
                ASSERT_EQ(covered, want ? 1 : 0) << "case " << i << " at " << x << "," << y;
            }
        }
    }
}

TEST(WallModelTest, PlacesWindowAtRequestedRect) {
    WallModel model(grid(2, 2, 1920, 1080));
    auto id = model.place_window({300, 200, 50, 100}, slide("Hello"), WindowKind::Slideshow);
    auto scene = model.render();
    ASSERT_EQ(scene.windows.size(), 1u);
    EXPECT_EQ(scene.windows[0].rect, (Rect{300, 200, 50, 100}));
    EXPECT_EQ(scene.windows[0].kind, WindowKind::Slideshow);
    EXPECT_EQ(scene.visible_area(id), 5000);
    EXPECT_EQ(scene.screens[0], (std::vector<VisibleRegion>{{id, {300, 200, 50, 100}}}));
}

TEST(WallModelTest, NewWindowsGoOnTop) {
    WallModel model(grid(1, 1, 100, 100));
    auto a = model.place_window({0, 0, 10, 10}, {});
    auto b = model.place_window({0, 0, 10, 10}, {});
    model.set_z(a, 50);
    auto c = model.place_window({0, 0, 10, 10}, {});
    EXPECT_GT(model.window(c)->z, model.window(a)->z);
    EXPECT_GT(model.window(a)->z, model.window(b)->z);
    auto scene = model.render();
    EXPECT_EQ(scene.windows.back().id, c);
    EXPECT_EQ(scene.visible_area(c), 100);
    EXPECT_EQ(scene.visible_area(a), 0);
}

TEST(WallModelTest, ZMustBeUnique) {
    WallModel model(grid(1, 1, 100, 100));
    auto a = model.place_window({0, 0, 10, 10}, {});
    auto b = model.place_window({0, 0, 10, 10}, {});
    auto rev = model.revision();
    try {
        model.set_z(b, model.window(a)->z);
        FAIL() << "expected ZTaken";
    } catch (const WallError& e) {
        EXPECT_EQ(e.kind(), WallError::Kind::ZTaken);
    }
    EXPECT_EQ(model.revision(), rev);
    model.set_z(b, model.window(b)->z);  // own z is fine
    EXPECT_EQ(model.revision(), rev + 1);
}

TEST(WallModelTest, RejectsUnknownWindowsAndNegativeSizes) {
    WallModel model(grid(1, 1, 100, 100));
    auto expect_kind = [](auto fn, WallError::Kind kind) {
        try {
            fn();
            ADD_FAILURE() << "no error";
        } catch (const WallError& e) {
            EXPECT_EQ(e.kind(), kind);
        }
    };
    expect_kind([&] { model.set_x(9, 1); }, WallError::Kind::UnknownWindow);
    expect_kind([&] { model.close(9); }, WallError::Kind::UnknownWindow);
    expect_kind([&] { model.place_window({0, 0, -1, 5}, {}); }, WallError::Kind::InvalidArgument);
    auto id = model.place_window({0, 0, 5, 5}, {});
    expect_kind([&] { model.set_width(id, -1); }, WallError::Kind::InvalidArgument);
    expect_kind([&] { model.set_rect(id, {0, 0, 1, -1}); }, WallError::Kind::InvalidArgument);
    EXPECT_EQ(model.revision(), 1u);
}

TEST(WallModelTest, ZeroWidthWindowContributesNothing) {
    WallModel model(grid(1, 1, 40, 30));
    auto id = model.place_window({5, 5, 0, 10}, slide("x"));
    auto scene = model.render();
    EXPECT_TRUE(model.contains(id));
    EXPECT_EQ(scene.visible_area(id), 0);
    auto img = export_raster(scene, 0);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x) ASSERT_EQ(img.at(x, y), scene.config.background);
}

TEST(WallModelTest, RevisionAdvancesOnEveryMutation) {
    WallModel model(grid(1, 2, 100, 100));
    EXPECT_EQ(model.revision(), 0u);
    auto id = model.place_window({1, 2, 3, 4}, {});
    std::uint64_t rev = model.revision();
    EXPECT_EQ(rev, 1u);
    std::vector<std::function<void()>> ops = {
        [&] { model.set_rect(id, {1, 2, 3, 4}); },  // unchanged state still counts
        [&] { model.set_x(id, 10); },
        [&] { model.set_y(id, 10); },
        [&] { model.set_width(id, 10); },
        [&] { model.set_height(id, 10); },
        [&] { model.set_z(id, 7); },
        [&] { model.set_visible(id, false); },
        [&] { model.set_content(id, slide("t")); },
        [&] { model.close(id); },
    };
    for (auto& op : ops) {
        auto before = model.render();
        op();
        EXPECT_EQ(model.revision(), rev + 1);
        rev = model.revision();
        EXPECT_EQ(model.render(), model.render());
        EXPECT_NE(model.render().revision, before.revision);
    }
}

TEST(WallModelTest, ListenersRunOutsideTheLock) {
    WallModel model(grid(1, 1, 100, 100));
    std::vector<std::uint64_t> seen;
    int token = model.add_listener([&](std::uint64_t rev) {
        seen.push_back(rev);
        EXPECT_EQ(model.render().revision, rev);  // would deadlock under the lock
    });
    auto id = model.place_window({0, 0, 1, 1}, {});
    model.set_x(id, 4);
    model.remove_listener(token);
    model.set_x(id, 5);
    EXPECT_EQ(seen, (std::vector<std::uint64_t>{1, 2}));
}

TEST(WallRenderTest, OverlapShrinksLowerWindowByIntersection) {
    WallModel model(grid(1, 1, 1000, 1000));
    auto low = model.place_window({100, 100, 400, 300}, {});
    auto high = model.place_window({300, 200, 400, 400}, {});
    auto scene = model.render();
    // Intersection is x 300..500, y 200..400.
    EXPECT_EQ(scene.visible_area(low), 400 * 300 - 200 * 200);
    EXPECT_EQ(scene.visible_area(high), 400 * 400);
    model.set_visible(high, false);
    EXPECT_EQ(model.render().visible_area(low), 400 * 300);
}

TEST(WallRenderTest, DecompositionMatchesPixelOwnership) {
    RandomWallGenerator gen(4242);
    for (int round = 0; round < 150; ++round) {
        WallConfig cfg = gen.config();
        cfg.screen_width = static_cast<int>(gen.pick(1, 60));
        cfg.screen_height = static_cast<int>(gen.pick(1, 40));
        WallModel model(cfg);
        random_scene(model, gen, static_cast<int>(gen.pick(0, 7)));
        auto scene = model.render();
        auto owner = owner_grid(scene);
        auto cw = cfg.canvas_width();

        std::vector<std::uint32_t> painted(owner.size(), 0);
        for (int s = 0; s < cfg.screen_count(); ++s) {
            Rect sr = cfg.screen_rect(s);
            for (const auto& r : scene.screens[s]) {
                for (auto y = r.local.y; y < r.local.bottom(); ++y) {
                    for (auto x = r.local.x; x < r.local.right(); ++x) {
                        ASSERT_TRUE(x >= 0 && y >= 0 && x < sr.width && y < sr.height);
                        auto& p = painted[static_cast<std::size_t>((sr.y + y) * cw + sr.x + x)];
                        ASSERT_EQ(p, 0u) << "overlapping regions in round " << round;
                        p = r.window_id;
                    }
                }
            }
        }
        ASSERT_EQ(painted, owner) << "round " << round;

        // Conservation: visible + occluded + off-canvas = area.
        for (const auto& w : scene.windows) {
            std::int64_t visible = 0, occluded = 0, off = 0;
            for (auto y = w.rect.y; y < w.rect.bottom(); ++y) {
                for (auto x = w.rect.x; x < w.rect.right(); ++x) {
                    if (x < 0 || y < 0 || x >= cw || y >= cfg.canvas_height()) {
                        ++off;
                    } else if (owner[static_cast<std::size_t>(y * cw + x)] == w.id) {
                        ++visible;
                    } else {
                        ++occluded;
                    }
                }
            }
            EXPECT_EQ(visible + occluded + off, w.rect.area());
            EXPECT_EQ(scene.visible_area(w.id), w.visible ? visible : 0);
        }
    }
}

TEST(WallRenderTest, NoChromePixels) {
    RandomWallGenerator gen(99);
    for (int round = 0; round < 60; ++round) {
        WallConfig cfg = gen.config();
        cfg.screen_width = static_cast<int>(gen.pick(1, 80));
        cfg.screen_height = static_cast<int>(gen.pick(1, 50));
        WallModel model(cfg);
        random_scene(model, gen, static_cast<int>(gen.pick(0, 6)));
        auto scene = model.render();
        auto owner = owner_grid(scene);
        auto cw = cfg.canvas_width();
        for (int s = 0; s < cfg.screen_count(); ++s) {
            Rect sr = cfg.screen_rect(s);
            auto img = export_raster(scene, s);
            ASSERT_EQ(img.width, cfg.screen_width);
            ASSERT_EQ(img.height, cfg.screen_height);
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    auto id = owner[static_cast<std::size_t>((sr.y + y) * cw + sr.x + x)];
                    Rgb want = cfg.background;
                    if (id != 0) {
                        const Window* w = scene.find(id);
                        want = content_pixel(w->content, w->rect.width, w->rect.height, sr.x + x - w->rect.x,
                                             sr.y + y - w->rect.y);
                    }
                    ASSERT_EQ(img.at(x, y), want) << "round " << round << " screen " << s << " at " << x << "," << y;
                }
            }
        }
    }
}

TEST(WallRenderTest, EmptyWallIsBackground) {
    WallConfig cfg = grid(1, 2, 16, 9);
    cfg.background = {1, 2, 3};
    WallModel model(cfg);
    auto scene = model.render();
    EXPECT_TRUE(scene.windows.empty());
    for (int s = 0; s < 2; ++s) {
        auto img = export_raster(scene, s);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 16; ++x) ASSERT_EQ(img.at(x, y), cfg.background);
    }
    EXPECT_THROW(export_raster(scene, 2), WallError);
    EXPECT_THROW(export_raster(scene, -1), WallError);
}

TEST(WallRenderTest, OutputIsDeterministic) {
    auto build = [] {
        WallModel model(grid(2, 2, 64, 36));
        model.place_window({10, 10, 80, 40}, slide("Quarterly", "one\ntwo\nthree"));
        model.place_window({50, 20, 30, 30}, {});
        return model.render();
    };
    auto a = build();
    auto b = build();
    EXPECT_EQ(scene_to_json(a), scene_to_json(b));
    for (int s = 0; s < 4; ++s) EXPECT_EQ(export_raster(a, s).to_ppm(), export_raster(b, s).to_ppm());
}

TEST(WallRenderTest, SlidesShowTitleAndBodyBlocks) {
    auto c = slide("A title", "first line\nsecond");
    const std::int64_t w = 320, h = 240;
    std::set<std::tuple<int, int, int>> colors;
    std::int64_t ink = 0;
    for (std::int64_t v = 0; v < h; ++v) {
        for (std::int64_t u = 0; u < w; ++u) {
            Rgb p = content_pixel(c, w, h, u, v);
            colors.insert({p.r, p.g, p.b});
            if (!(p == c.background)) ++ink;
        }
    }
    EXPECT_EQ(colors.size(), 2u);  // background + light ink on a dark slide
    EXPECT_TRUE(colors.count({240, 240, 240}));
    EXPECT_GT(ink, 0);
    // Top-left margin is background; title row has ink at the left margin.
    EXPECT_EQ(content_pixel(c, w, h, 0, 0), c.background);
    EXPECT_EQ(content_pixel(c, w, h, w / 16, h / 12), (Rgb{240, 240, 240}));

    auto blank = slide("ignored", "ignored", 12);
    for (std::int64_t v = 0; v < h; v += 7)
        for (std::int64_t u = 0; u < w; u += 7) ASSERT_EQ(content_pixel(blank, w, h, u, v), blank.background);

    WindowContent card;
    EXPECT_EQ(content_pixel(card, 80, 10, 0, 0), (Rgb{255, 255, 255}));
    EXPECT_EQ(content_pixel(card, 80, 10, 79, 9), (Rgb{0, 0, 0}));
}

TEST(WallRenderTest, SceneJsonShape) {
    WallModel model(grid(2, 2, 1920, 1080));
    auto id = model.place_window({1800, 100, 240, 200}, slide("T"), WindowKind::Slideshow);
    auto text = scene_to_json(model.render());
    EXPECT_NE(text.find("\"chromeless\": true"), std::string::npos);
    EXPECT_NE(text.find("\"kind\": \"slideshow\""), std::string::npos);
    EXPECT_NE(text.find("\"canvasWidth\": 3840"), std::string::npos);
    EXPECT_NE(text.find("\"window\": " + std::to_string(id)), std::string::npos);
    EXPECT_LT(text.find("\"revision\""), text.find("\"screens\""));
    EXPECT_LT(text.find("\"screens\""), text.find("\"wall\""));
}

TEST(WallRenderTest, SnapshotDirectoryLayout) {
    auto dir = std::filesystem::temp_directory_path() / ("sume-wall-test-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    WallModel model(grid(1, 2, 8, 6));
    model.place_window({4, 1, 8, 4}, slide("t"));
    auto scene = model.render();
    auto rev = write_snapshot_dir(scene, dir);
    EXPECT_EQ(rev, dir / "rev-1");
    for (int s = 0; s < 2; ++s) {
        std::ifstream in(rev / ("screen-" + std::to_string(s) + ".ppm"), std::ios::binary);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
        auto img = Image::from_ppm(bytes);
        EXPECT_EQ(img.rgb, export_raster(scene, s).rgb);
    }
    std::ifstream json(rev / "scene.json");
    std::string text((std::istreambuf_iterator<char>(json)), {});
    EXPECT_EQ(text, scene_to_json(scene));
    std::filesystem::remove_all(dir);
    EXPECT_THROW(Image::from_ppm({'P', '3'}), std::invalid_argument);
}

}  // namespace
