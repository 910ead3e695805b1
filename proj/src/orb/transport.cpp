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

#include "sume/orb/transport.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <stdexcept>
#include <sys/socket.h>
#include <unistd.h>

#include "sume/orb/fault.hpp"

namespace sume::orb {

namespace {

std::string errno_text(int err) { return std::strerror(err); }

int poll_timeout(std::optional<std::chrono::milliseconds> timeout) {
    if (!timeout) return -1;
    auto ms = timeout->count();
    if (ms < 0) return 0;
    return ms > INT32_MAX ? INT32_MAX : static_cast<int>(ms);
}

struct AddrInfo {
    addrinfo* list = nullptr;
    ~AddrInfo() {
        if (list) freeaddrinfo(list);
    }
};

void resolve(const Endpoint& ep, bool passive, AddrInfo& out) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    std::string port = std::to_string(ep.port);
    const char* host = ep.host.empty() ? nullptr : ep.host.c_str();
    int rc = getaddrinfo(host, port.c_str(), &hints, &out.list);
    if (rc != 0) throw TransportError("cannot resolve " + ep.to_string() + ": " + gai_strerror(rc));
}

std::string describe_peer(const sockaddr_storage& addr) {
    char host[NI_MAXHOST];
    char serv[NI_MAXSERV];
    if (getnameinfo(reinterpret_cast<const sockaddr*>(&addr), sizeof(addr), host, sizeof(host), serv, sizeof(serv),
                    NI_NUMERICHOST | NI_NUMERICSERV) != 0) {
        return "tcp";
    }
    return std::string(host) + ":" + serv;
}

}  // namespace

FdStream::FdStream(int fd, std::string peer) : fd_(fd), peer_(std::move(peer)) {}

FdStream::~FdStream() {
    if (fd_ >= 0) ::close(fd_);
}

std::optional<std::size_t> FdStream::read_some(std::span<std::uint8_t> buf,
                                               std::optional<std::chrono::milliseconds> timeout) {
    if (buf.empty()) return 0;
    for (;;) {
        pollfd pfd{fd_, POLLIN, 0};
        int rc = ::poll(&pfd, 1, poll_timeout(timeout));
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw TransportError("poll: " + errno_text(errno));
        }
        if (rc == 0) return std::nullopt;
        ssize_t n = ::read(fd_, buf.data(), buf.size());
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) continue;
            if (errno == ECONNRESET || shut_) return 0;
            throw TransportError("read: " + errno_text(errno));
        }
        return static_cast<std::size_t>(n);
    }
}

void FdStream::write_all(std::span<const std::uint8_t> data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == ENOTSOCK) n = ::write(fd_, data.data() + sent, data.size() - sent);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError("write: " + errno_text(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

void FdStream::shutdown() {
    if (shut_.exchange(true)) return;
    ::shutdown(fd_, SHUT_RDWR);
}

Endpoint parse_endpoint(std::string_view text, std::uint16_t default_port) {
    Endpoint ep;
    ep.port = default_port;
    std::string_view host = text;
    auto colon = text.rfind(':');
    if (colon != std::string_view::npos) {
        host = text.substr(0, colon);
        std::string_view port = text.substr(colon + 1);
        if (port.empty() || port.size() > 5) throw std::invalid_argument("invalid port in endpoint '" + std::string(text) + "'");
        unsigned value = 0;
        for (char c : port) {
            if (c < '0' || c > '9') throw std::invalid_argument("invalid port in endpoint '" + std::string(text) + "'");
            value = value * 10 + static_cast<unsigned>(c - '0');
        }
        if (value > 65535) throw std::invalid_argument("port out of range in endpoint '" + std::string(text) + "'");
        ep.port = static_cast<std::uint16_t>(value);
    }
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    if (!host.empty()) ep.host = std::string(host);
    return ep;
}

std::unique_ptr<FdStream> connect_tcp(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
    AddrInfo info;
    resolve(endpoint, false, info);
    std::string last_error = "no addresses";
    for (addrinfo* ai = info.list; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text(errno);
            continue;
        }
        int flags = fcntl(fd, F_GETFL);
        fcntl(fd, F_SETFL, flags | O_NONBLOCK);
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc < 0 && errno == EINPROGRESS) {
            pollfd pfd{fd, POLLOUT, 0};
            rc = ::poll(&pfd, 1, poll_timeout(timeout));
            if (rc == 0) {
                ::close(fd);
                last_error = "timed out";
                continue;
            }
            int err = 0;
            socklen_t len = sizeof(err);
            getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
            rc = err == 0 ? 0 : -1;
            errno = err;
        }
        if (rc < 0) {
            last_error = errno_text(errno);
            ::close(fd);
            continue;
        }
        fcntl(fd, F_SETFL, flags);
        int one = 1;
        setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return std::make_unique<FdStream>(fd, endpoint.to_string());
    }
    throw TransportError("cannot connect to " + endpoint.to_string() + ": " + last_error);
}

std::pair<std::unique_ptr<FdStream>, std::unique_ptr<FdStream>> make_stream_pair() {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) < 0) {
        throw TransportError("socketpair: " + errno_text(errno));
    }
    return {std::make_unique<FdStream>(fds[0], "pair"), std::make_unique<FdStream>(fds[1], "pair")};
}

TcpListener::TcpListener(const Endpoint& endpoint) {
    AddrInfo info;
    resolve(endpoint, true, info);
    std::string last_error = "no addresses";
    for (addrinfo* ai = info.list; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text(errno);
            continue;
        }
        int one = 1;
        setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd, ai->ai_addr, ai->ai_addrlen) < 0 || ::listen(fd, 64) < 0) {
            last_error = errno_text(errno);
            ::close(fd);
            continue;
        }
        sockaddr_storage bound{};
        socklen_t len = sizeof(bound);
        getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
        port_ = bound.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
                                            : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
        fd_ = fd;
        return;
    }
    throw TransportError("cannot listen on " + endpoint.to_string() + ": " + last_error);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<FdStream> TcpListener::accept(std::chrono::milliseconds timeout) {
    if (closed_) return nullptr;
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, poll_timeout(timeout));
    if (rc <= 0 || closed_) return nullptr;
    sockaddr_storage addr{};
    socklen_t len = sizeof(addr);
    int fd = ::accept4(fd_, reinterpret_cast<sockaddr*>(&addr), &len, SOCK_CLOEXEC);
    if (fd < 0) return nullptr;
    int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return std::make_unique<FdStream>(fd, describe_peer(addr));
}

void TcpListener::close() {
    if (closed_.exchange(true)) return;
    ::shutdown(fd_, SHUT_RDWR);
}

}  // namespace sume::orb
