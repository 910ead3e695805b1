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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sume/orb/fault.hpp"
#include "sume/orb/wire_value.hpp"

// Framing and message bodies. A frame on the stream is
//
//   u32 body length | u8 msgType | u32 correlationId | payload
//
// with all integers big-endian and the body capped at kMaxFrameBody.
namespace sume::orb {

class ByteStream;

inline constexpr std::uint16_t kProtocolVersion = 1;
inline constexpr std::uint32_t kMaxFrameBody = 16u * 1024u * 1024u;
inline constexpr std::uint16_t kDefaultPort = 7410;

enum class MsgType : std::uint8_t {
    Hello = 0x01,
    HelloAck = 0x02,
    Activate = 0x03,
    ActivateAck = 0x04,
    Invoke = 0x05,
    Result = 0x06,
    Fault = 0x07,
    Subscribe = 0x08,
    SubscribeAck = 0x09,
    Event = 0x0A,
    Release = 0x0B,
    ReleaseAck = 0x0C,
    Ping = 0x0D,
    Pong = 0x0E,
    Bye = 0x0F,
    GetId = 0x10,
    GetIdAck = 0x11,
    Reflect = 0x12,
    ReflectAck = 0x13,
};

std::string_view msg_type_name(std::uint8_t raw);

struct Frame {
    std::uint8_t type = 0;  // raw so unknown types survive decoding
    std::uint32_t correlation = 0;
    std::vector<std::uint8_t> payload;

    MsgType msg() const { return static_cast<MsgType>(type); }
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);

struct ReadOutcome {
    enum class Kind {
        Frame,      // `frame` is valid
        Eof,        // peer closed between frames
        Malformed,  // declared body shorter than the header; consumed, stream still in sync
        Oversized,  // declared body over the limit; stream can not be resynchronised
    };
    Kind kind = Kind::Eof;
    Frame frame;
    std::uint32_t declared_length = 0;
};

/// Reads one frame. Waits up to `idle` (forever if empty) for the first
/// byte, then the rest of the frame must arrive within `frame_deadline`.
/// Throws TransportError on I/O failure, timeout or EOF inside a frame.
ReadOutcome read_frame(ByteStream& stream, std::optional<std::chrono::milliseconds> idle,
                       std::chrono::milliseconds frame_deadline);

// Message bodies. encode() produces the frame payload; decode() consumes a
// whole payload and throws DecodeError on any mismatch.

struct HelloMsg {
    std::uint16_t version = kProtocolVersion;
    std::string token;  // empty = none

    std::vector<std::uint8_t> encode() const;
    static HelloMsg decode(std::span<const std::uint8_t> p);
};

struct HelloAckMsg {
    std::uint16_t version = kProtocolVersion;
    std::string server_name;

    std::vector<std::uint8_t> encode() const;
    static HelloAckMsg decode(std::span<const std::uint8_t> p);
};

struct ActivateMsg {
    std::string prog_id;

    std::vector<std::uint8_t> encode() const;
    static ActivateMsg decode(std::span<const std::uint8_t> p);
};

/// ACTIVATE_ACK payload: u64 objectId + STRING interfaceName.
struct ObjectRefMsg {
    ObjectRef ref;

    std::vector<std::uint8_t> encode() const;
    static ObjectRefMsg decode(std::span<const std::uint8_t> p);
};

struct InvokeMsg {
    std::uint64_t object_id = 0;
    std::uint32_t disp_id = 0;
    std::vector<WireValue> args;

    std::vector<std::uint8_t> encode() const;
    static InvokeMsg decode(std::span<const std::uint8_t> p);
};

struct ResultMsg {
    WireValue value;

    std::vector<std::uint8_t> encode() const;
    static ResultMsg decode(std::span<const std::uint8_t> p);
};

struct FaultMsg {
    std::uint32_t code = 0;
    std::string message;
    std::string detail;

    std::vector<std::uint8_t> encode() const;
    static FaultMsg decode(std::span<const std::uint8_t> p);
    ComException to_exception() const;
};

/// mode 1 subscribes, 0 unsubscribes.
struct SubscribeMsg {
    std::uint64_t object_id = 0;
    std::string event_name;
    bool enable = true;

    std::vector<std::uint8_t> encode() const;
    static SubscribeMsg decode(std::span<const std::uint8_t> p);
};

/// Shared by SUBSCRIBE_ACK and GETID_ACK.
struct DispIdMsg {
    std::uint32_t disp_id = 0;

    std::vector<std::uint8_t> encode() const;
    static DispIdMsg decode(std::span<const std::uint8_t> p);
};

struct EventMsg {
    std::uint64_t object_id = 0;
    std::uint32_t disp_id = 0;
    std::vector<WireValue> args;

    std::vector<std::uint8_t> encode() const;
    static EventMsg decode(std::span<const std::uint8_t> p);
};

struct ReleaseMsg {
    std::uint64_t object_id = 0;

    std::vector<std::uint8_t> encode() const;
    static ReleaseMsg decode(std::span<const std::uint8_t> p);
};

struct ReleaseAckMsg {
    std::uint32_t remaining = 0;

    std::vector<std::uint8_t> encode() const;
    static ReleaseAckMsg decode(std::span<const std::uint8_t> p);
};

struct GetIdMsg {
    std::uint64_t object_id = 0;
    std::string name;

    std::vector<std::uint8_t> encode() const;
    static GetIdMsg decode(std::span<const std::uint8_t> p);
};

/// REFLECT_ACK: the server's reverse-generated library as `.sidl` text.
struct ReflectAckMsg {
    std::string idl;

    std::vector<std::uint8_t> encode() const;
    static ReflectAckMsg decode(std::span<const std::uint8_t> p);
};

}  // namespace sume::orb
