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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sume/wall/geometry.hpp"

namespace sume::presenter {

// Values of the PpSlideLayout enum.
inline constexpr int kLayoutTitle = 1;
inline constexpr int kLayoutText = 2;
inline constexpr int kLayoutBlank = 12;

bool is_known_layout(int layout);
/// Accepts "title", "text", "blank" and the enum names ("ppLayoutTitle", ...).
std::optional<int> layout_from_name(std::string_view name);
std::string_view layout_name(int layout);
wall::Rgb default_background(int layout);

struct SlideSpec {
    int layout = kLayoutText;
    std::string title;
    std::string body;
    wall::Rgb background{255, 255, 255};

    friend bool operator==(const SlideSpec&, const SlideSpec&) = default;
};

struct Deck {
    std::string title;
    std::vector<SlideSpec> slides;

    friend bool operator==(const Deck&, const Deck&) = default;
};

/// `line` is 1-based, or 0 when no position is known.
class DeckError : public std::runtime_error {
public:
    DeckError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parses a `.deck` document:
///   {"title": "...", "slides": [{"layout": "title", "title": "...",
///                                "body": "...", "background": "#RRGGBB"}]}
/// `body` and `background` are optional.
Deck parse_deck(std::string_view text);
Deck load_deck(const std::filesystem::path& path);
std::string deck_to_json(const Deck& deck);

}  // namespace sume::presenter
