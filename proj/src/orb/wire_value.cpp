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

#include "sume/orb/wire_value.hpp"

#include <bit>
#include <sstream>

namespace sume::orb {

namespace {

constexpr int kMaxDepth = 64;
constexpr std::uint32_t kMaxZeroWidthItems = 65536;

std::size_t min_payload_width(Tag tag) {
    switch (tag) {
        case Tag::Void:
        case Tag::Null: return 0;
        case Tag::Bool: return 1;
        case Tag::I2: return 2;
        case Tag::I4:
        case Tag::R4:
        case Tag::String: return 4;
        case Tag::I8:
        case Tag::R8: return 8;
        case Tag::ObjRef: return 12;
        case Tag::Array: return 5;
    }
    return 0;
}

void write_payload(ByteWriter& out, const WireValue& v) {
    switch (v.tag()) {
        case Tag::Void:
        case Tag::Null: return;
        case Tag::Bool: out.u8(v.as_bool() ? 1 : 0); return;
        case Tag::I2: out.u16(static_cast<std::uint16_t>(v.as_i2())); return;
        case Tag::I4: out.u32(static_cast<std::uint32_t>(v.as_i4())); return;
        case Tag::I8: out.u64(static_cast<std::uint64_t>(v.as_i8())); return;
        case Tag::R4: out.u32(std::bit_cast<std::uint32_t>(v.as_r4())); return;
        case Tag::R8: out.u64(std::bit_cast<std::uint64_t>(v.as_r8())); return;
        case Tag::String: out.string(v.as_string()); return;
        case Tag::ObjRef:
            out.u64(v.as_objref().id);
            out.string(v.as_objref().interface_name);
            return;
        case Tag::Array: {
            const WireArray& arr = v.as_array();
            if (arr.items.size() > UINT32_MAX) throw EncodeError("array too long");
            out.u8(static_cast<std::uint8_t>(arr.element_tag));
            out.u32(static_cast<std::uint32_t>(arr.items.size()));
            for (const auto& item : arr.items) write_payload(out, item);
            return;
        }
    }
}

std::string read_utf8(ByteReader& in) {
    std::string s = in.string();
    if (!is_valid_utf8(s)) throw DecodeError("invalid UTF-8 in string");
    return s;
}

WireValue read_payload(ByteReader& in, Tag tag, int depth) {
    switch (tag) {
        case Tag::Void: return WireValue();
        case Tag::Null: return WireValue::null();
        case Tag::Bool: {
            std::uint8_t b = in.u8();
            if (b > 1) throw DecodeError("invalid BOOL payload " + std::to_string(b));
            return WireValue::boolean(b == 1);
        }
        case Tag::I2: return WireValue::i2(static_cast<std::int16_t>(in.u16()));
        case Tag::I4: return WireValue::i4(static_cast<std::int32_t>(in.u32()));
        case Tag::I8: return WireValue::i8(static_cast<std::int64_t>(in.u64()));
        case Tag::R4: return WireValue::r4(std::bit_cast<float>(in.u32()));
        case Tag::R8: return WireValue::r8(std::bit_cast<double>(in.u64()));
        case Tag::String: return WireValue::string(read_utf8(in));
        case Tag::ObjRef: {
            std::uint64_t id = in.u64();
            if (id == 0) throw DecodeError("OBJREF id is zero");
            return WireValue::objref(id, read_utf8(in));
        }
        case Tag::Array: {
            if (depth >= kMaxDepth) throw DecodeError("value nested too deeply");
            std::uint8_t raw = in.u8();
            if (!is_valid_tag(raw)) throw DecodeError("invalid array element tag " + std::to_string(raw));
            Tag element = static_cast<Tag>(raw);
            std::uint32_t count = in.u32();
            std::size_t width = min_payload_width(element);
            if (width == 0 ? count > kMaxZeroWidthItems : count > in.remaining() / width) {
                throw DecodeError("array count " + std::to_string(count) + " exceeds available input");
            }
            std::vector<WireValue> items;
            items.reserve(count);
            for (std::uint32_t i = 0; i < count; ++i) items.push_back(read_payload(in, element, depth + 1));
            return WireValue::array(element, std::move(items));
        }
    }
    throw DecodeError("invalid tag");
}

}  // namespace

std::string_view tag_name(Tag tag) {
    switch (tag) {
        case Tag::Void: return "VOID";
        case Tag::Bool: return "BOOL";
        case Tag::I2: return "I2";
        case Tag::I4: return "I4";
        case Tag::I8: return "I8";
        case Tag::R4: return "R4";
        case Tag::R8: return "R8";
        case Tag::String: return "STRING";
        case Tag::ObjRef: return "OBJREF";
        case Tag::Array: return "ARRAY";
        case Tag::Null: return "NULL";
    }
    return "?";
}

bool is_valid_tag(std::uint8_t raw) { return raw <= static_cast<std::uint8_t>(Tag::Null); }

WireValue WireValue::null() { return WireValue(Tag::Null, std::monostate{}); }
WireValue WireValue::boolean(bool v) { return WireValue(Tag::Bool, v); }
WireValue WireValue::i2(std::int16_t v) { return WireValue(Tag::I2, v); }
WireValue WireValue::i4(std::int32_t v) { return WireValue(Tag::I4, v); }
WireValue WireValue::i8(std::int64_t v) { return WireValue(Tag::I8, v); }
WireValue WireValue::r4(float v) { return WireValue(Tag::R4, v); }
WireValue WireValue::r8(double v) { return WireValue(Tag::R8, v); }

WireValue WireValue::string(std::string v) {
    if (!is_valid_utf8(v)) throw EncodeError("STRING payload is not valid UTF-8");
    return WireValue(Tag::String, std::move(v));
}

WireValue WireValue::objref(std::uint64_t id, std::string interface_name) {
    if (id == 0) throw EncodeError("OBJREF id must be nonzero");
    if (!is_valid_utf8(interface_name)) throw EncodeError("interface name is not valid UTF-8");
    return WireValue(Tag::ObjRef, ObjectRef{id, std::move(interface_name)});
}

WireValue WireValue::array(Tag element_tag, std::vector<WireValue> items) {
    for (const auto& item : items) {
        if (item.tag() != element_tag) {
            throw EncodeError("array element tagged " + std::string(tag_name(item.tag())) + " in " +
                              std::string(tag_name(element_tag)) + " array");
        }
    }
    return WireValue(Tag::Array, WireArray{element_tag, std::move(items)});
}

bool operator==(const WireValue& a, const WireValue& b) {
    if (a.tag_ != b.tag_) return false;
    switch (a.tag_) {
        case Tag::R4: return std::bit_cast<std::uint32_t>(a.as_r4()) == std::bit_cast<std::uint32_t>(b.as_r4());
        case Tag::R8: return std::bit_cast<std::uint64_t>(a.as_r8()) == std::bit_cast<std::uint64_t>(b.as_r8());
        case Tag::Array: {
            const auto& x = a.as_array();
            const auto& y = b.as_array();
            return x.element_tag == y.element_tag && x.items == y.items;
        }
        case Tag::Void:
        case Tag::Null: return true;
        case Tag::Bool: return a.as_bool() == b.as_bool();
        case Tag::I2: return a.as_i2() == b.as_i2();
        case Tag::I4: return a.as_i4() == b.as_i4();
        case Tag::I8: return a.as_i8() == b.as_i8();
        case Tag::String: return a.as_string() == b.as_string();
        case Tag::ObjRef: return a.as_objref() == b.as_objref();
    }
    return false;
}

std::string WireValue::to_string() const {
    std::ostringstream out;
    switch (tag_) {
        case Tag::Void: return "VOID";
        case Tag::Null: return "NULL";
        case Tag::Bool: return as_bool() ? "true" : "false";
        case Tag::I2: return std::to_string(as_i2());
        case Tag::I4: return std::to_string(as_i4());
        case Tag::I8: return std::to_string(as_i8());
        case Tag::R4: out << as_r4(); return out.str();
        case Tag::R8: out << as_r8(); return out.str();
        case Tag::String: return "\"" + as_string() + "\"";
        case Tag::ObjRef: return "OBJREF(" + std::to_string(as_objref().id) + ", " + as_objref().interface_name + ")";
        case Tag::Array: {
            out << '[';
            const auto& items = as_array().items;
            for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << items[i].to_string();
            out << ']';
            return out.str();
        }
    }
    return "?";
}

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t cp;
        if ((c & 0xe0) == 0xc0) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c & 0xf0) == 0xe0) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c & 0xf8) == 0xf0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xc0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // Overlong forms, surrogates and out-of-range code points.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
        if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
        i += len;
    }
    return true;
}

void write_value(ByteWriter& out, const WireValue& v) {
    out.u8(static_cast<std::uint8_t>(v.tag()));
    write_payload(out, v);
}

std::vector<std::uint8_t> encode_value(const WireValue& v) {
    ByteWriter out;
    write_value(out, v);
    return out.take();
}

WireValue read_value(ByteReader& in) {
    std::uint8_t raw = in.u8();
    if (!is_valid_tag(raw)) throw DecodeError("invalid tag " + std::to_string(raw));
    return read_payload(in, static_cast<Tag>(raw), 0);
}

WireValue decode_value(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    WireValue v = read_value(in);
    in.expect_end();
    return v;
}

}  // namespace sume::orb
