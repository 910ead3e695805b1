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

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sume/orb/wire_value.hpp"

namespace sume::testing {

// Random WireValue trees biased towards edge values: signed zeros,
// subnormals, extremes, infinities, NaN payloads, multi-byte UTF-8.
class RandomWireGenerator {
public:
    explicit RandomWireGenerator(std::uint64_t seed) : rng_(seed) {}

    orb::WireValue next(int max_depth = 3) { return value(pick_tag(max_depth > 0), max_depth); }

    float edge_r4() {
        static const float edges[] = {0.0f,
                                      -0.0f,
                                      std::numeric_limits<float>::denorm_min(),
                                      -std::numeric_limits<float>::denorm_min(),
                                      std::numeric_limits<float>::min(),
                                      std::numeric_limits<float>::max(),
                                      std::numeric_limits<float>::lowest(),
                                      std::numeric_limits<float>::infinity(),
                                      -std::numeric_limits<float>::infinity(),
                                      std::numeric_limits<float>::quiet_NaN(),
                                      std::bit_cast<float>(0x7fa00001u),
                                      std::bit_cast<float>(0x00400000u),
                                      1.0f / 3.0f};
        if (pick(0, 2) == 0) return std::bit_cast<float>(static_cast<std::uint32_t>(rng_()));
        return edges[pick(0, std::size(edges) - 1)];
    }

    double edge_r8() {
        static const double edges[] = {0.0,
                                       -0.0,
                                       std::numeric_limits<double>::denorm_min(),
                                       -std::numeric_limits<double>::denorm_min(),
                                       std::numeric_limits<double>::min(),
                                       std::numeric_limits<double>::max(),
                                       std::numeric_limits<double>::lowest(),
                                       std::numeric_limits<double>::infinity(),
                                       -std::numeric_limits<double>::infinity(),
                                       std::numeric_limits<double>::quiet_NaN(),
                                       std::bit_cast<double>(0xfff0000000000abcull),
                                       std::bit_cast<double>(0x0008000000000000ull),
                                       0.1};
        if (pick(0, 2) == 0) return std::bit_cast<double>(rng_());
        return edges[pick(0, std::size(edges) - 1)];
    }

    std::string utf8() {
        static const char* pieces[] = {"a", "Z", "0", " ", "\xc3\xa9", "\xd0\x96", "\xe2\x82\xac", "\xf0\x9f\x8e\x9e",
                                       "\x7f", "\n", "\"", "\\"};
        std::string s;
        int n = pick(0, 12);
        for (int i = 0; i < n; ++i) s += pieces[pick(0, std::size(pieces) - 1)];
        return s;
    }

    orb::Tag pick_tag(bool allow_array) {
        for (;;) {
            auto t = static_cast<orb::Tag>(pick(0, 10));
            if (t != orb::Tag::Array || allow_array) return t;
        }
    }

    orb::WireValue value(orb::Tag tag, int depth) {
        using orb::Tag;
        using orb::WireValue;
        switch (tag) {
            case Tag::Void: return WireValue();
            case Tag::Null: return WireValue::null();
            case Tag::Bool: return WireValue::boolean(pick(0, 1) == 1);
            case Tag::I2: return WireValue::i2(static_cast<std::int16_t>(rng_()));
            case Tag::I4: return WireValue::i4(static_cast<std::int32_t>(rng_()));
            case Tag::I8: return WireValue::i8(static_cast<std::int64_t>(rng_()));
            case Tag::R4: return WireValue::r4(edge_r4());
            case Tag::R8: return WireValue::r8(edge_r8());
            case Tag::String: return WireValue::string(utf8());
            case Tag::ObjRef: return WireValue::objref(rng_() | 1u, "I" + std::to_string(pick(0, 99)));
            case Tag::Array: {
                Tag element = pick_tag(depth > 1);
                std::vector<WireValue> items;
                int n = pick(0, 5);
                for (int i = 0; i < n; ++i) items.push_back(value(element, depth - 1));
                return WireValue::array(element, std::move(items));
            }
        }
        return WireValue();
    }

    std::mt19937_64& rng() { return rng_; }

private:
    int pick(std::size_t lo, std::size_t hi) {
        return static_cast<int>(std::uniform_int_distribution<std::size_t>(lo, hi)(rng_));
    }

    std::mt19937_64 rng_;
};

}  // namespace sume::testing
