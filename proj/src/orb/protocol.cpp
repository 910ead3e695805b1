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

#include "sume/orb/protocol.hpp"

#include <array>

#include "sume/orb/transport.hpp"

namespace sume::orb {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::array<std::string_view, 8> kFaultNames = {
    "E_UNKNOWN",        "E_PROGID_UNKNOWN", "E_OBJECT_NOT_FOUND", "E_MEMBER_NOT_FOUND",
    "E_TYPE_MISMATCH",  "E_APP_FAULT",      "E_PROTOCOL",         "E_ACCESS_DENIED",
};

template <typename Fn>
auto decode_whole(std::span<const std::uint8_t> p, Fn&& fn) {
    ByteReader in(p);
    auto msg = fn(in);
    in.expect_end();
    return msg;
}

std::string read_utf8(ByteReader& in) {
    std::string s = in.string();
    if (!is_valid_utf8(s)) throw DecodeError("invalid UTF-8 in string");
    return s;
}

void write_args(ByteWriter& out, const std::vector<WireValue>& args) {
    if (args.size() > UINT16_MAX) throw EncodeError("too many arguments");
    out.u16(static_cast<std::uint16_t>(args.size()));
    for (const auto& a : args) write_value(out, a);
}

std::vector<WireValue> read_args(ByteReader& in) {
    std::uint16_t n = in.u16();
    if (n > in.remaining()) throw DecodeError("argument count exceeds payload");
    std::vector<WireValue> args;
    args.reserve(n);
    for (std::uint16_t i = 0; i < n; ++i) args.push_back(read_value(in));
    return args;
}

// Reads exactly buf.size() bytes before `deadline`. Returns false on a clean
// EOF before the first byte when `eof_ok`.
bool read_exact(ByteStream& stream, std::span<std::uint8_t> buf, Clock::time_point deadline, bool eof_ok) {
    std::size_t got = 0;
    while (got < buf.size()) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (left.count() <= 0) throw TransportError("frame read timed out");
        auto n = stream.read_some(buf.subspan(got), left);
        if (!n) throw TransportError("frame read timed out");
        if (*n == 0) {
            if (got == 0 && eof_ok) return false;
            throw TransportError("connection closed inside a frame");
        }
        got += *n;
    }
    return true;
}

}  // namespace

std::string_view fault_name(FaultCode code) {
    auto raw = static_cast<std::uint32_t>(code);
    return raw < kFaultNames.size() ? kFaultNames[raw] : kFaultNames[0];
}

std::optional<FaultCode> fault_from_name(std::string_view name) {
    for (std::uint32_t i = 1; i < kFaultNames.size(); ++i) {
        if (kFaultNames[i] == name) return static_cast<FaultCode>(i);
    }
    return std::nullopt;
}

bool is_registered_fault(std::uint32_t raw) { return raw >= 1 && raw < kFaultNames.size(); }

std::string_view msg_type_name(std::uint8_t raw) {
    static constexpr std::array<std::string_view, 20> names = {
        "?",         "HELLO",   "HELLO_ACK",   "ACTIVATE",  "ACTIVATE_ACK", "INVOKE",    "RESULT",
        "FAULT",     "SUBSCRIBE", "SUBSCRIBE_ACK", "EVENT", "RELEASE",      "RELEASE_ACK", "PING",
        "PONG",      "BYE",     "GETID",       "GETID_ACK", "REFLECT",      "REFLECT_ACK",
    };
    return raw < names.size() ? names[raw] : names[0];
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    std::size_t body = 5 + frame.payload.size();
    if (body > kMaxFrameBody) throw EncodeError("frame body exceeds " + std::to_string(kMaxFrameBody) + " bytes");
    ByteWriter out;
    out.buffer().reserve(4 + body);
    out.u32(static_cast<std::uint32_t>(body));
    out.u8(frame.type);
    out.u32(frame.correlation);
    out.bytes(frame.payload);
    return out.take();
}

ReadOutcome read_frame(ByteStream& stream, std::optional<std::chrono::milliseconds> idle,
                       std::chrono::milliseconds frame_deadline) {
    ReadOutcome outcome;
    std::array<std::uint8_t, 4> len_buf{};

    // Wait for the first byte without a deadline (or with the idle one).
    auto first = stream.read_some(std::span(len_buf).first(1), idle);
    if (!first) throw TransportError("idle timeout");
    if (*first == 0) return outcome;

    auto deadline = Clock::now() + frame_deadline;
    read_exact(stream, std::span(len_buf).subspan(1), deadline, false);
    std::uint32_t len = (std::uint32_t{len_buf[0]} << 24) | (std::uint32_t{len_buf[1]} << 16) |
                        (std::uint32_t{len_buf[2]} << 8) | std::uint32_t{len_buf[3]};
    outcome.declared_length = len;
    if (len > kMaxFrameBody) {
        outcome.kind = ReadOutcome::Kind::Oversized;
        return outcome;
    }
    std::vector<std::uint8_t> body(len);
    read_exact(stream, body, deadline, false);
    if (len < 5) {
        outcome.kind = ReadOutcome::Kind::Malformed;
        return outcome;
    }
    ByteReader in(body);
    outcome.frame.type = in.u8();
    outcome.frame.correlation = in.u32();
    outcome.frame.payload.assign(body.begin() + 5, body.end());
    outcome.kind = ReadOutcome::Kind::Frame;
    return outcome;
}

std::vector<std::uint8_t> HelloMsg::encode() const {
    ByteWriter out;
    out.u16(version);
    out.string(token);
    return out.take();
}

HelloMsg HelloMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        HelloMsg m;
        m.version = in.u16();
        m.token = read_utf8(in);
        return m;
    });
}

std::vector<std::uint8_t> HelloAckMsg::encode() const {
    ByteWriter out;
    out.u16(version);
    out.string(server_name);
    return out.take();
}

HelloAckMsg HelloAckMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        HelloAckMsg m;
        m.version = in.u16();
        m.server_name = read_utf8(in);
        return m;
    });
}

std::vector<std::uint8_t> ActivateMsg::encode() const {
    ByteWriter out;
    out.string(prog_id);
    return out.take();
}

ActivateMsg ActivateMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) { return ActivateMsg{read_utf8(in)}; });
}

std::vector<std::uint8_t> ObjectRefMsg::encode() const {
    ByteWriter out;
    out.u64(ref.id);
    out.string(ref.interface_name);
    return out.take();
}

ObjectRefMsg ObjectRefMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        ObjectRefMsg m;
        m.ref.id = in.u64();
        if (m.ref.id == 0) throw DecodeError("object id is zero");
        m.ref.interface_name = read_utf8(in);
        return m;
    });
}

std::vector<std::uint8_t> InvokeMsg::encode() const {
    ByteWriter out;
    out.u64(object_id);
    out.u32(disp_id);
    write_args(out, args);
    return out.take();
}

InvokeMsg InvokeMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        InvokeMsg m;
        m.object_id = in.u64();
        m.disp_id = in.u32();
        m.args = read_args(in);
        return m;
    });
}

std::vector<std::uint8_t> ResultMsg::encode() const { return encode_value(value); }

ResultMsg ResultMsg::decode(std::span<const std::uint8_t> p) { return ResultMsg{decode_value(p)}; }

std::vector<std::uint8_t> FaultMsg::encode() const {
    ByteWriter out;
    out.u32(code);
    out.string(message);
    out.string(detail);
    return out.take();
}

FaultMsg FaultMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        FaultMsg m;
        m.code = in.u32();
        m.message = read_utf8(in);
        m.detail = read_utf8(in);
        return m;
    });
}

ComException FaultMsg::to_exception() const {
    auto c = is_registered_fault(code) ? static_cast<FaultCode>(code) : FaultCode::Protocol;
    return ComException(c, message, detail);
}

std::vector<std::uint8_t> SubscribeMsg::encode() const {
    ByteWriter out;
    out.u64(object_id);
    out.string(event_name);
    out.u8(enable ? 1 : 0);
    return out.take();
}

SubscribeMsg SubscribeMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        SubscribeMsg m;
        m.object_id = in.u64();
        m.event_name = read_utf8(in);
        std::uint8_t mode = in.u8();
        if (mode > 1) throw DecodeError("invalid subscribe mode " + std::to_string(mode));
        m.enable = mode == 1;
        return m;
    });
}

std::vector<std::uint8_t> DispIdMsg::encode() const {
    ByteWriter out;
    out.u32(disp_id);
    return out.take();
}

DispIdMsg DispIdMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) { return DispIdMsg{in.u32()}; });
}

std::vector<std::uint8_t> EventMsg::encode() const {
    ByteWriter out;
    out.u64(object_id);
    out.u32(disp_id);
    write_args(out, args);
    return out.take();
}

EventMsg EventMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        EventMsg m;
        m.object_id = in.u64();
        m.disp_id = in.u32();
        m.args = read_args(in);
        return m;
    });
}

std::vector<std::uint8_t> ReleaseMsg::encode() const {
    ByteWriter out;
    out.u64(object_id);
    return out.take();
}

ReleaseMsg ReleaseMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) { return ReleaseMsg{in.u64()}; });
}

std::vector<std::uint8_t> ReleaseAckMsg::encode() const {
    ByteWriter out;
    out.u32(remaining);
    return out.take();
}

ReleaseAckMsg ReleaseAckMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) { return ReleaseAckMsg{in.u32()}; });
}

std::vector<std::uint8_t> GetIdMsg::encode() const {
    ByteWriter out;
    out.u64(object_id);
    out.string(name);
    return out.take();
}

GetIdMsg GetIdMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) {
        GetIdMsg m;
        m.object_id = in.u64();
        m.name = read_utf8(in);
        return m;
    });
}

std::vector<std::uint8_t> ReflectAckMsg::encode() const {
    ByteWriter out;
    out.string(idl);
    return out.take();
}

ReflectAckMsg ReflectAckMsg::decode(std::span<const std::uint8_t> p) {
    return decode_whole(p, [](ByteReader& in) { return ReflectAckMsg{read_utf8(in)}; });
}

}  // namespace sume::orb
