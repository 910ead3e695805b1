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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace sume::orb {

/// Any reliable, ordered byte stream: a TCP connection, a socketpair, a
/// serial line wrapped in an fd.
class ByteStream {
public:
    virtual ~ByteStream() = default;

    /// Returns the number of bytes read, 0 at end of stream, or nullopt if
    /// nothing arrived within `timeout` (no timeout when empty). Throws
    /// TransportError on failure.
    virtual std::optional<std::size_t> read_some(std::span<std::uint8_t> buf,
                                                 std::optional<std::chrono::milliseconds> timeout) = 0;

    /// Throws TransportError if the peer is gone.
    virtual void write_all(std::span<const std::uint8_t> data) = 0;

    /// Unblocks pending reads and writes on both ends. Idempotent.
    virtual void shutdown() = 0;

    /// Human-readable peer description for logs.
    virtual std::string peer() const { return "stream"; }
};

/// Owns a connected socket or pipe file descriptor.
class FdStream : public ByteStream {
public:
    explicit FdStream(int fd, std::string peer = "fd");
    ~FdStream() override;

    FdStream(const FdStream&) = delete;
    FdStream& operator=(const FdStream&) = delete;

    std::optional<std::size_t> read_some(std::span<std::uint8_t> buf,
                                         std::optional<std::chrono::milliseconds> timeout) override;
    void write_all(std::span<const std::uint8_t> data) override;
    void shutdown() override;
    std::string peer() const override { return peer_; }

    int fd() const { return fd_; }

private:
    int fd_;
    std::string peer_;
    std::atomic<bool> shut_{false};
};

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;

    std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// Parses "host:port", "host" or ":port". Throws std::invalid_argument.
Endpoint parse_endpoint(std::string_view text, std::uint16_t default_port);

/// Throws TransportError ("connection refused: ..." etc).
std::unique_ptr<FdStream> connect_tcp(const Endpoint& endpoint,
                                      std::chrono::milliseconds timeout = std::chrono::seconds(5));

/// Two connected in-process streams (AF_UNIX socketpair).
std::pair<std::unique_ptr<FdStream>, std::unique_ptr<FdStream>> make_stream_pair();

class TcpListener {
public:
    /// Binds and listens; port 0 picks a free port. Throws TransportError.
    explicit TcpListener(const Endpoint& endpoint);
    ~TcpListener();

    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }

    /// Waits up to `timeout` for a connection; nullptr on timeout or after
    /// close().
    std::unique_ptr<FdStream> accept(std::chrono::milliseconds timeout);

    void close();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> closed_{false};
};

}  // namespace sume::orb
