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

#include "sume/presenter/deck.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sume::presenter {

using nlohmann::json;

namespace {

int line_at(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    int line = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

// Best-effort position of a bad value: first occurrence of its JSON text.
int line_of_value(std::string_view text, const json& value) {
    auto pos = text.find(value.dump());
    return pos == std::string_view::npos ? 0 : line_at(text, pos);
}

std::string string_field(std::string_view text, const json& obj, const char* key, const std::string& where,
                         bool required) {
    if (!obj.contains(key)) {
        if (required) throw DeckError(0, where + ": missing \"" + key + "\"");
        return {};
    }
    const json& v = obj.at(key);
    if (!v.is_string()) throw DeckError(line_of_value(text, v), where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace

bool is_known_layout(int layout) {
    return layout == kLayoutTitle || layout == kLayoutText || layout == kLayoutBlank;
}

std::optional<int> layout_from_name(std::string_view name) {
    if (name == "title" || name == "ppLayoutTitle") return kLayoutTitle;
    if (name == "text" || name == "ppLayoutText") return kLayoutText;
    if (name == "blank" || name == "ppLayoutBlank") return kLayoutBlank;
    return std::nullopt;
}

std::string_view layout_name(int layout) {
    switch (layout) {
        case kLayoutTitle: return "title";
        case kLayoutText: return "text";
        case kLayoutBlank: return "blank";
        default: return "unknown";
    }
}

wall::Rgb default_background(int layout) {
    return layout == kLayoutTitle ? wall::Rgb{0x1F, 0x3A, 0x68} : wall::Rgb{0xFF, 0xFF, 0xFF};
}

Deck parse_deck(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DeckError(line_at(text, e.byte > 0 ? e.byte - 1 : 0), "syntax error");
    }
    if (!doc.is_object()) throw DeckError(1, "deck must be an object");
    Deck deck;
    deck.title = string_field(text, doc, "title", "deck", true);
    if (!doc.contains("slides")) throw DeckError(0, "deck: missing \"slides\"");
    const json& slides = doc.at("slides");
    if (!slides.is_array()) throw DeckError(line_of_value(text, slides), "deck: \"slides\" must be an array");
    for (std::size_t i = 0; i < slides.size(); ++i) {
        const json& s = slides[i];
        std::string where = "slide " + std::to_string(i + 1);
        if (!s.is_object()) throw DeckError(line_of_value(text, s), where + ": expected an object");
        SlideSpec spec;
        std::string layout = string_field(text, s, "layout", where, true);
        auto code = layout_from_name(layout);
        if (!code) throw DeckError(line_of_value(text, s.at("layout")), where + ": unknown layout \"" + layout + "\"");
        spec.layout = *code;
        spec.title = string_field(text, s, "title", where, false);
        spec.body = string_field(text, s, "body", where, false);
        spec.background = default_background(spec.layout);
        if (s.contains("background")) {
            std::string bg = string_field(text, s, "background", where, false);
            auto rgb = wall::Rgb::parse(bg);
            if (!rgb) {
                throw DeckError(line_of_value(text, s.at("background")),
                                where + ": background \"" + bg + "\" is not #RRGGBB");
            }
            spec.background = *rgb;
        }
        deck.slides.push_back(std::move(spec));
    }
    return deck;
}

Deck load_deck(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DeckError(0, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_deck(buf.str());
}

std::string deck_to_json(const Deck& deck) {
    json slides = json::array();
    for (const auto& s : deck.slides) {
        slides.push_back({{"layout", std::string(layout_name(s.layout))},
                          {"title", s.title},
                          {"body", s.body},
                          {"background", s.background.to_hex()}});
    }
    return json{{"title", deck.title}, {"slides", std::move(slides)}}.dump(2) + "\n";
}

}  // namespace sume::presenter
