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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sume/orb/byte_io.hpp"

namespace sume::orb {

enum class Tag : std::uint8_t {
    Void = 0,
    Bool = 1,
    I2 = 2,
    I4 = 3,
    I8 = 4,
    R4 = 5,
    R8 = 6,
    String = 7,
    ObjRef = 8,
    Array = 9,
    Null = 10,
};

std::string_view tag_name(Tag tag);
bool is_valid_tag(std::uint8_t raw);

/// Connection-scoped handle to a server-side object. Ids are never zero.
struct ObjectRef {
    std::uint64_t id = 0;
    std::string interface_name;

    friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
};

class WireValue;

struct WireArray {
    Tag element_tag = Tag::Void;
    std::vector<WireValue> items;
};

/// Tagged, self-describing marshallable value. Equality is bit-exact for
/// floating point (so -0.0 != 0.0 and NaN payloads are distinguished).
class WireValue {
public:
    WireValue() = default;

    static WireValue null();
    static WireValue boolean(bool v);
    static WireValue i2(std::int16_t v);
    static WireValue i4(std::int32_t v);
    static WireValue i8(std::int64_t v);
    static WireValue r4(float v);
    static WireValue r8(double v);
    /// Throws EncodeError if `v` is not valid UTF-8.
    static WireValue string(std::string v);
    /// Throws EncodeError for a zero id.
    static WireValue objref(std::uint64_t id, std::string interface_name);
    static WireValue objref(ObjectRef ref) { return objref(ref.id, std::move(ref.interface_name)); }
    /// Throws EncodeError if any item's tag differs from `element_tag`.
    static WireValue array(Tag element_tag, std::vector<WireValue> items);

    Tag tag() const { return tag_; }
    bool is_void() const { return tag_ == Tag::Void; }
    bool is_null() const { return tag_ == Tag::Null; }

    // Accessors throw std::bad_variant_access on a tag mismatch.
    bool as_bool() const { return std::get<bool>(data_); }
    std::int16_t as_i2() const { return std::get<std::int16_t>(data_); }
    std::int32_t as_i4() const { return std::get<std::int32_t>(data_); }
    std::int64_t as_i8() const { return std::get<std::int64_t>(data_); }
    float as_r4() const { return std::get<float>(data_); }
    double as_r8() const { return std::get<double>(data_); }
    const std::string& as_string() const { return std::get<std::string>(data_); }
    const ObjectRef& as_objref() const { return std::get<ObjectRef>(data_); }
    const WireArray& as_array() const { return std::get<WireArray>(data_); }

    /// Human-readable rendering for logs and CLI output.
    std::string to_string() const;

    friend bool operator==(const WireValue& a, const WireValue& b);

private:
    using Storage = std::variant<std::monostate, bool, std::int16_t, std::int32_t, std::int64_t, float, double,
                                 std::string, ObjectRef, WireArray>;

    WireValue(Tag tag, Storage data) : tag_(tag), data_(std::move(data)) {}

    Tag tag_ = Tag::Void;
    Storage data_;
};

bool is_valid_utf8(std::string_view s);

/// Tag byte followed by the payload.
std::vector<std::uint8_t> encode_value(const WireValue& v);
void write_value(ByteWriter& out, const WireValue& v);

/// Decodes exactly one value occupying all of `bytes`.
WireValue decode_value(std::span<const std::uint8_t> bytes);
WireValue read_value(ByteReader& in);

}  // namespace sume::orb
