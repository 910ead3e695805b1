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

#include "sume/wall/geometry.hpp"

#include <stdexcept>

namespace sume::wall {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::optional<Rgb> Rgb::parse(std::string_view text) {
    if (text.size() != 7 || text[0] != '#') return std::nullopt;
    std::uint8_t channels[3];
    for (int i = 0; i < 3; ++i) {
        int hi = hex_digit(text[1 + 2 * i]);
        int lo = hex_digit(text[2 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        channels[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return Rgb{channels[0], channels[1], channels[2]};
}

std::string Rgb::to_hex() const {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out = "#";
    for (std::uint8_t c : {r, g, b}) {
        out += digits[c >> 4];
        out += digits[c & 15];
    }
    return out;
}

std::vector<Rect> subtract(const Rect& a, const Rect& b) {
    if (a.empty()) return {};
    Rect i = intersect(a, b);
    if (i.empty()) return {a};
    std::vector<Rect> out;
    if (i.y > a.y) out.push_back({a.x, a.y, a.width, i.y - a.y});
    if (i.bottom() < a.bottom()) out.push_back({a.x, i.bottom(), a.width, a.bottom() - i.bottom()});
    if (i.x > a.x) out.push_back({a.x, i.y, i.x - a.x, i.height});
    if (i.right() < a.right()) out.push_back({i.right(), i.y, a.right() - i.right(), i.height});
    return out;
}

void WallConfig::validate() const {
    if (rows < 1) throw std::invalid_argument("rows must be at least 1");
    if (cols < 1) throw std::invalid_argument("cols must be at least 1");
    if (screen_width < 1) throw std::invalid_argument("screen width must be at least 1");
    if (screen_height < 1) throw std::invalid_argument("screen height must be at least 1");
}

Rect WallConfig::screen_rect(int index) const {
    int row = index / cols;
    int col = index % cols;
    return {std::int64_t{col} * screen_width, std::int64_t{row} * screen_height, screen_width, screen_height};
}

std::vector<ScreenPiece> clip_to_screens(const WallConfig& config, const Rect& rect) {
    std::vector<ScreenPiece> out;
    Rect on_canvas = intersect(rect, config.canvas());
    if (on_canvas.empty()) return out;
    auto first_col = static_cast<int>(on_canvas.x / config.screen_width);
    auto last_col = static_cast<int>((on_canvas.right() - 1) / config.screen_width);
    auto first_row = static_cast<int>(on_canvas.y / config.screen_height);
    auto last_row = static_cast<int>((on_canvas.bottom() - 1) / config.screen_height);
    for (int row = first_row; row <= last_row; ++row) {
        for (int col = first_col; col <= last_col; ++col) {
            int index = row * config.cols + col;
            Rect screen = config.screen_rect(index);
            Rect part = intersect(on_canvas, screen);
            if (part.empty()) continue;
            out.push_back({index, {part.x - screen.x, part.y - screen.y, part.width, part.height}});
        }
    }
    return out;
}

}  // namespace sume::wall
