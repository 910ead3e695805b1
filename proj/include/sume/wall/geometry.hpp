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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sume::wall {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    /// "#RRGGBB" (either case); nullopt otherwise.
    static std::optional<Rgb> parse(std::string_view text);
    std::string to_hex() const;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Axis-aligned pixel rectangle. Coordinates are global wall pixels unless
/// stated otherwise; the origin is the top-left corner of screen 0.
struct Rect {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t width = 0;
    std::int64_t height = 0;

    std::int64_t right() const { return x + width; }
    std::int64_t bottom() const { return y + height; }
    bool empty() const { return width <= 0 || height <= 0; }
    std::int64_t area() const { return empty() ? 0 : width * height; }
    bool contains(std::int64_t px, std::int64_t py) const {
        return px >= x && px < right() && py >= y && py < bottom();
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
    std::int64_t x0 = std::max(a.x, b.x);
    std::int64_t y0 = std::max(a.y, b.y);
    std::int64_t x1 = std::min(a.right(), b.right());
    std::int64_t y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return {};
    return {x0, y0, x1 - x0, y1 - y0};
}

/// a minus b as at most four disjoint rectangles (top, bottom, left, right bands).
std::vector<Rect> subtract(const Rect& a, const Rect& b);

struct WallConfig {
    int rows = 1;
    int cols = 1;
    int screen_width = 1920;
    int screen_height = 1080;
    Rgb background{};

    /// Throws std::invalid_argument for non-positive dimensions.
    void validate() const;

    std::int64_t canvas_width() const { return std::int64_t{cols} * screen_width; }
    std::int64_t canvas_height() const { return std::int64_t{rows} * screen_height; }
    int screen_count() const { return rows * cols; }
    Rect canvas() const { return {0, 0, canvas_width(), canvas_height()}; }
    /// Screens are numbered row-major from 0.
    Rect screen_rect(int index) const;

    friend bool operator==(const WallConfig&, const WallConfig&) = default;
};

struct ScreenPiece {
    int screen = 0;
    Rect local;  // screen-relative

    friend bool operator==(const ScreenPiece&, const ScreenPiece&) = default;
};

/// Splits `rect` into its per-screen parts, in screen order. Off-canvas
/// area is dropped; an entirely off-canvas rect yields nothing.
std::vector<ScreenPiece> clip_to_screens(const WallConfig& config, const Rect& rect);

}  // namespace sume::wall
