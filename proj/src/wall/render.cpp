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

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sume/wall/wall.hpp"

namespace sume::wall {

using nlohmann::json;

namespace {

json content_json(const WindowContent& c) {
    json out;
    out["type"] = c.type == WindowContent::Type::Slide ? "slide" : "testcard";
    out["deck"] = c.deck_title;
    out["slideIndex"] = c.slide_index;
    out["slideCount"] = c.slide_count;
    out["layout"] = c.layout;
    out["title"] = c.title;
    out["background"] = c.background.to_hex();
    return out;
}

std::int64_t glyph_count(std::string_view s) {
    std::int64_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::vector<std::string_view> split_lines(std::string_view body) {
    std::vector<std::string_view> lines;
    while (!body.empty()) {
        auto nl = body.find('\n');
        lines.push_back(body.substr(0, nl));
        if (nl == std::string_view::npos) break;
        body.remove_prefix(nl + 1);
    }
    return lines;
}

Rgb ink_for(const Rgb& bg) {
    int luma = (299 * bg.r + 587 * bg.g + 114 * bg.b) / 1000;
    return luma >= 128 ? Rgb{16, 16, 16} : Rgb{240, 240, 240};
}

constexpr Rgb kTestCard[8] = {{255, 255, 255}, {255, 255, 0}, {0, 255, 255}, {0, 255, 0},
                              {255, 0, 255},   {255, 0, 0},   {0, 0, 255},   {0, 0, 0}};

// Layout numbers follow the slide layout enum: 1 title, 2 text, 12 blank.
constexpr int kLayoutTitle = 1;
constexpr int kLayoutBlank = 12;

// Ink rectangles of one window's content, in window-local pixels.
class ContentPainter {
public:
    ContentPainter(const WindowContent& c, std::int64_t w, std::int64_t h) : content_(c), w_(w) {
        if (c.type != WindowContent::Type::Slide || c.layout == kLayoutBlank) return;
        ink_ = ink_for(c.background);
        const std::int64_t mx = w / 16;
        const std::int64_t my = h / 12;
        const std::int64_t span = w - 2 * mx;
        const auto lines = split_lines(c.body);
        if (c.layout == kLayoutTitle) {
            std::int64_t ty = h * 2 / 5;
            std::int64_t th = h / 8;
            add_bar(mx, span, ty, th, glyph_count(c.title), 40, true);
            if (!lines.empty()) add_bar(mx, span, ty + th + h / 20, h / 20, glyph_count(lines.front()), 60, true);
            return;
        }
        std::int64_t th = h / 10;
        add_bar(mx, span, my, th, glyph_count(c.title), 40, false);
        std::int64_t pitch = h / 14;
        std::int64_t bar = h / 28;
        std::int64_t y = my + th + my;
        for (auto line : lines) {
            if (pitch <= 0 || y + bar > h - my) break;
            add_bar(mx, span, y, bar, glyph_count(line), 60, false);
            y += pitch;
        }
    }

    Rgb at(std::int64_t u, std::int64_t v) const {
        if (content_.type == WindowContent::Type::TestCard) {
            std::int64_t band = w_ > 0 ? u * 8 / w_ : 0;
            return kTestCard[std::clamp<std::int64_t>(band, 0, 7)];
        }
        for (const auto& r : bars_) {
            if (r.contains(u, v)) return ink_;
        }
        return content_.background;
    }

private:
    // A text line drawn as a bar whose length follows the glyph count.
    void add_bar(std::int64_t x0, std::int64_t span, std::int64_t y0, std::int64_t h, std::int64_t glyphs,
                 std::int64_t cap, bool centered) {
        if (glyphs <= 0 || span <= 0 || h <= 0) return;
        std::int64_t len = std::max<std::int64_t>(1, span * std::min(glyphs, cap) / cap);
        bars_.push_back({centered ? x0 + (span - len) / 2 : x0, y0, len, h});
    }

    const WindowContent& content_;
    std::int64_t w_;
    Rgb ink_;
    std::vector<Rect> bars_;
};

}  // namespace

Rgb content_pixel(const WindowContent& c, std::int64_t w, std::int64_t h, std::int64_t u, std::int64_t v) {
    return ContentPainter(c, w, h).at(u, v);
}

std::string scene_to_json(const SceneSnapshot& scene) {
    const WallConfig& cfg = scene.config;
    json doc;
    doc["revision"] = scene.revision;
    doc["wall"] = {{"rows", cfg.rows},
                   {"cols", cfg.cols},
                   {"screenWidth", cfg.screen_width},
                   {"screenHeight", cfg.screen_height},
                   {"canvasWidth", cfg.canvas_width()},
                   {"canvasHeight", cfg.canvas_height()},
                   {"background", cfg.background.to_hex()}};
    json windows = json::array();
    for (const auto& w : scene.windows) {
        windows.push_back({{"id", w.id},
                           {"x", w.rect.x},
                           {"y", w.rect.y},
                           {"width", w.rect.width},
                           {"height", w.rect.height},
                           {"z", w.z},
                           {"visible", w.visible},
                           {"chromeless", true},
                           {"kind", std::string(kind_name(w.kind))},
                           {"content", content_json(w.content)}});
    }
    doc["windows"] = std::move(windows);
    json screens = json::array();
    for (std::size_t i = 0; i < scene.screens.size(); ++i) {
        json regions = json::array();
        for (const auto& r : scene.screens[i]) {
            regions.push_back({{"window", r.window_id},
                               {"x", r.local.x},
                               {"y", r.local.y},
                               {"width", r.local.width},
                               {"height", r.local.height}});
        }
        screens.push_back({{"index", i}, {"regions", std::move(regions)}});
    }
    doc["screens"] = std::move(screens);
    return doc.dump(2) + "\n";
}

std::vector<std::uint8_t> Image::to_ppm() const {
    std::string header = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), rgb.begin(), rgb.end());
    return out;
}

Image Image::from_ppm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) t += static_cast<char>(bytes[pos++]);
        return t;
    };
    if (token() != "P6") throw std::invalid_argument("not a binary PPM");
    Image img;
    try {
        img.width = std::stoi(token());
        img.height = std::stoi(token());
        if (std::stoi(token()) != 255) throw std::invalid_argument("unsupported PPM depth");
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed PPM header");
    }
    ++pos;  // single whitespace after maxval
    std::size_t need = static_cast<std::size_t>(img.width) * img.height * 3;
    if (img.width < 0 || img.height < 0 || pos > bytes.size() || bytes.size() - pos != need) {
        throw std::invalid_argument("PPM pixel data has the wrong size");
    }
    img.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
    return img;
}

Image export_raster(const SceneSnapshot& scene, int screen) {
    const WallConfig& cfg = scene.config;
    if (screen < 0 || screen >= cfg.screen_count()) {
        throw WallError(WallError::Kind::InvalidArgument, "unknown screen " + std::to_string(screen));
    }
    Image img;
    img.width = cfg.screen_width;
    img.height = cfg.screen_height;
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = cfg.background.r;
        img.rgb[i + 1] = cfg.background.g;
        img.rgb[i + 2] = cfg.background.b;
    }
    const Rect sr = cfg.screen_rect(screen);
    for (const auto& w : scene.windows) {
        if (!w.visible) continue;
        Rect part = intersect(w.rect, sr);
        if (part.empty()) continue;
        const ContentPainter painter(w.content, w.rect.width, w.rect.height);
        for (std::int64_t gy = part.y; gy < part.bottom(); ++gy) {
            auto* row = &img.rgb[static_cast<std::size_t>((gy - sr.y) * img.width) * 3];
            for (std::int64_t gx = part.x; gx < part.right(); ++gx) {
                Rgb c = painter.at(gx - w.rect.x, gy - w.rect.y);
                auto* px = row + (gx - sr.x) * 3;
                px[0] = c.r;
                px[1] = c.g;
                px[2] = c.b;
            }
        }
    }
    return img;
}

std::filesystem::path write_snapshot_dir(const SceneSnapshot& scene, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::path rev = dir / ("rev-" + std::to_string(scene.revision));
    fs::create_directories(rev);
    auto write = [](const fs::path& p, const void* data, std::size_t n) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
        if (!out) throw std::runtime_error("cannot write " + p.string());
    };
    for (int i = 0; i < scene.config.screen_count(); ++i) {
        auto ppm = export_raster(scene, i).to_ppm();
        write(rev / ("screen-" + std::to_string(i) + ".ppm"), ppm.data(), ppm.size());
    }
    std::string text = scene_to_json(scene);
    write(rev / "scene.json", text.data(), text.size());
    return rev;
}

WallConfig parse_wall_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("wall config: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("wall config: expected an object");
    WallConfig cfg;
    auto get_int = [&](const char* key, int& field) {
        if (!doc.contains(key)) throw std::invalid_argument(std::string("wall config: missing \"") + key + "\"");
        const auto& v = doc[key];
        if (!v.is_number_integer()) throw std::invalid_argument(std::string("wall config: \"") + key + "\" must be an integer");
        auto n = v.get<std::int64_t>();
        if (n < 1 || n > 1'000'000) throw std::invalid_argument(std::string("wall config: \"") + key + "\" out of range");
        field = static_cast<int>(n);
    };
    get_int("rows", cfg.rows);
    get_int("cols", cfg.cols);
    get_int("screenWidth", cfg.screen_width);
    get_int("screenHeight", cfg.screen_height);
    if (doc.contains("background")) {
        const auto& bg = doc["background"];
        std::optional<Rgb> parsed;
        if (bg.is_string()) parsed = Rgb::parse(bg.get<std::string>());
        if (!parsed) throw std::invalid_argument("wall config: \"background\" must be \"#RRGGBB\"");
        cfg.background = *parsed;
    }
    cfg.validate();
    return cfg;
}

WallConfig load_wall_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read wall config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_wall_config(buf.str());
}

}  // namespace sume::wall
