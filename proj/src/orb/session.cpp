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

#include "sume/orb/session.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "sume/orb/protocol.hpp"

namespace sume::orb {

namespace {

using Clock = std::chrono::steady_clock;

struct Pending {
    bool done = false;
    Frame reply;
    std::function<void(const Frame&)> on_reply;
};

struct QueuedEvent {
    std::uint64_t object_id;
    std::uint32_t disp_id;
    std::vector<WireValue> args;
};

struct HandlerEntry {
    std::uint64_t token;
    std::shared_ptr<EventHandler> fn;
};

}  // namespace

class SessionImpl {
public:
    SessionImpl(std::unique_ptr<ByteStream> s, SessionOptions o) : stream(std::move(s)), options(std::move(o)) {}

    void start() {
        reader = std::thread([this] { reader_loop(); });
        events = std::thread([this] { event_loop(); });
    }

    Frame request(MsgType type, std::vector<std::uint8_t> payload, std::function<void(const Frame&)> on_reply = {},
                  std::optional<std::chrono::milliseconds> timeout = std::nullopt);
    void post(MsgType type, std::vector<std::uint8_t> payload);
    void shutdown_and_join();

    std::unique_ptr<ByteStream> stream;
    SessionOptions options;
    std::string server_name;
    std::uint16_t version = 0;

    std::mutex write_mu;
    std::mutex mu;
    std::condition_variable cv;
    std::uint32_t next_correlation = 1;
    std::unordered_map<std::uint32_t, std::shared_ptr<Pending>> pending;
    bool closed = false;
    std::string close_reason;
    bool closing = false;

    std::map<std::pair<std::uint64_t, std::uint32_t>, std::vector<HandlerEntry>> handlers;
    std::uint64_t next_token = 1;
    std::deque<QueuedEvent> event_queue;
    std::condition_variable event_cv;
    bool events_stop = false;

    std::thread reader;
    std::thread events;

private:
    void reader_loop();
    void event_loop();
    std::uint32_t send_frame(MsgType type, std::vector<std::uint8_t> payload, std::shared_ptr<Pending> p);
};

std::uint32_t SessionImpl::send_frame(MsgType type, std::vector<std::uint8_t> payload, std::shared_ptr<Pending> p) {
    std::uint32_t correlation;
    {
        std::lock_guard lock(mu);
        if (closed) throw TransportError("connection closed" + (close_reason.empty() ? "" : ": " + close_reason));
        correlation = next_correlation++;
        if (next_correlation == 0) next_correlation = 1;
        if (p) pending[correlation] = std::move(p);
    }
    auto bytes = encode_frame(Frame{static_cast<std::uint8_t>(type), correlation, std::move(payload)});
    try {
        std::lock_guard lock(write_mu);
        stream->write_all(bytes);
    } catch (...) {
        std::lock_guard lock(mu);
        pending.erase(correlation);
        throw;
    }
    return correlation;
}

Frame SessionImpl::request(MsgType type, std::vector<std::uint8_t> payload, std::function<void(const Frame&)> on_reply,
                           std::optional<std::chrono::milliseconds> timeout) {
    auto p = std::make_shared<Pending>();
    p->on_reply = std::move(on_reply);
    std::uint32_t correlation = send_frame(type, std::move(payload), p);
    std::unique_lock lock(mu);
    bool ok = cv.wait_for(lock, timeout.value_or(options.call_timeout), [&] { return p->done || closed; });
    if (!p->done) {
        pending.erase(correlation);
        if (!ok) throw TransportError(std::string(msg_type_name(static_cast<std::uint8_t>(type))) + " timed out");
        throw TransportError("connection closed" + (close_reason.empty() ? "" : ": " + close_reason));
    }
    if (p->reply.msg() == MsgType::Fault) throw FaultMsg::decode(p->reply.payload).to_exception();
    return std::move(p->reply);
}

void SessionImpl::post(MsgType type, std::vector<std::uint8_t> payload) {
    try {
        send_frame(type, std::move(payload), nullptr);
    } catch (const std::exception&) {
    }
}

void SessionImpl::reader_loop() {
    std::string reason;
    try {
        for (;;) {
            auto r = read_frame(*stream, std::nullopt, std::chrono::seconds(30));
            if (r.kind == ReadOutcome::Kind::Eof) {
                reason = "server closed the connection";
                break;
            }
            if (r.kind == ReadOutcome::Kind::Oversized) {
                reason = "oversized frame from server";
                break;
            }
            if (r.kind == ReadOutcome::Kind::Malformed) continue;
            Frame& f = r.frame;
            if (f.msg() == MsgType::Event) {
                try {
                    auto ev = EventMsg::decode(f.payload);
                    std::lock_guard lock(mu);
                    event_queue.push_back(QueuedEvent{ev.object_id, ev.disp_id, std::move(ev.args)});
                } catch (const DecodeError&) {
                    continue;
                }
                event_cv.notify_one();
                continue;
            }
            std::lock_guard lock(mu);
            auto it = pending.find(f.correlation);
            if (it == pending.end()) continue;
            auto p = it->second;
            pending.erase(it);
            if (p->on_reply && f.msg() != MsgType::Fault) {
                try {
                    p->on_reply(f);
                } catch (const std::exception&) {
                }
            }
            p->reply = std::move(f);
            p->done = true;
            cv.notify_all();
        }
    } catch (const std::exception& e) {
        reason = e.what();
    }
    {
        std::lock_guard lock(mu);
        closed = true;
        if (close_reason.empty()) close_reason = reason;
        events_stop = true;
    }
    cv.notify_all();
    event_cv.notify_all();
}

void SessionImpl::event_loop() {
    for (;;) {
        QueuedEvent ev;
        std::vector<std::shared_ptr<EventHandler>> targets;
        {
            std::unique_lock lock(mu);
            event_cv.wait(lock, [&] { return events_stop || !event_queue.empty(); });
            if (event_queue.empty()) return;
            ev = std::move(event_queue.front());
            event_queue.pop_front();
            auto it = handlers.find({ev.object_id, ev.disp_id});
            if (it == handlers.end()) continue;
            for (const auto& h : it->second) targets.push_back(h.fn);
        }
        for (const auto& fn : targets) {
            try {
                (*fn)(ev.args);
            } catch (const std::exception&) {
            }
        }
    }
}

void SessionImpl::shutdown_and_join() {
    stream->shutdown();
    if (reader.joinable()) reader.join();
    {
        std::lock_guard lock(mu);
        events_stop = true;
    }
    event_cv.notify_all();
    if (events.joinable()) {
        if (events.get_id() == std::this_thread::get_id()) {
            events.detach();
        } else {
            events.join();
        }
    }
}

// ---- Subscription ----

Subscription& Subscription::operator=(Subscription&& other) noexcept {
    if (this != &other) {
        cancel();
        session_ = std::move(other.session_);
        object_id_ = other.object_id_;
        disp_id_ = other.disp_id_;
        event_ = std::move(other.event_);
        token_ = std::exchange(other.token_, 0);
    }
    return *this;
}

void Subscription::cancel() {
    if (token_ == 0) return;
    if (auto s = session_.lock()) s->unsubscribe(object_id_, disp_id_, event_, token_);
    token_ = 0;
}

// ---- Session ----

Session::Session(std::unique_ptr<SessionImpl> impl) : impl_(std::move(impl)) {}

Session::~Session() {
    try {
        close();
    } catch (...) {
    }
}

std::shared_ptr<Session> Session::connect(const Endpoint& endpoint, SessionOptions options) {
    auto stream = connect_tcp(endpoint, options.connect_timeout);
    return attach(std::move(stream), std::move(options));
}

std::shared_ptr<Session> Session::attach(std::unique_ptr<ByteStream> stream, SessionOptions options) {
    auto impl = std::make_unique<SessionImpl>(std::move(stream), std::move(options));
    impl->start();
    std::shared_ptr<Session> session(new Session(std::move(impl)));
    auto& im = *session->impl_;
    auto reply = im.request(MsgType::Hello, HelloMsg{kProtocolVersion, im.options.token}.encode());
    if (reply.msg() != MsgType::HelloAck) throw ComException(FaultCode::Protocol, "expected HELLO_ACK");
    auto ack = HelloAckMsg::decode(reply.payload);
    im.version = ack.version;
    im.server_name = ack.server_name;
    return session;
}

const std::string& Session::server_name() const { return impl_->server_name; }
std::uint16_t Session::protocol_version() const { return impl_->version; }

bool Session::connected() const {
    std::lock_guard lock(impl_->mu);
    return !impl_->closed && !impl_->closing;
}

ObjectRef Session::activate(std::string_view prog_id) {
    auto reply = impl_->request(MsgType::Activate, ActivateMsg{std::string(prog_id)}.encode());
    return ObjectRefMsg::decode(reply.payload).ref;
}

std::uint32_t Session::get_dispid(const ObjectRef& ref, std::string_view member) {
    auto reply = impl_->request(MsgType::GetId, GetIdMsg{ref.id, std::string(member)}.encode());
    return DispIdMsg::decode(reply.payload).disp_id;
}

WireValue Session::invoke(const ObjectRef& ref, std::uint32_t disp_id, std::vector<WireValue> args) {
    auto reply = impl_->request(MsgType::Invoke, InvokeMsg{ref.id, disp_id, std::move(args)}.encode());
    return ResultMsg::decode(reply.payload).value;
}

Subscription Session::subscribe(const ObjectRef& ref, std::string_view event, EventHandler handler) {
    auto fn = std::make_shared<EventHandler>(std::move(handler));
    std::uint64_t token = 0;
    std::uint32_t disp_id = 0;
    // Runs on the reader thread under the session lock, before any EVENT
    // that follows the acknowledgement is queued.
    auto on_ack = [&, this, fn, object_id = ref.id](const Frame& f) {
        disp_id = DispIdMsg::decode(f.payload).disp_id;
        token = impl_->next_token++;
        impl_->handlers[{object_id, disp_id}].push_back(HandlerEntry{token, fn});
    };
    impl_->request(MsgType::Subscribe, SubscribeMsg{ref.id, std::string(event), true}.encode(), on_ack);
    std::lock_guard lock(impl_->mu);
    return Subscription(weak_from_this(), ref.id, disp_id, std::string(event), token);
}

void Session::unsubscribe(std::uint64_t object_id, std::uint32_t disp_id, const std::string& event,
                          std::uint64_t token) {
    {
        std::lock_guard lock(impl_->mu);
        auto it = impl_->handlers.find({object_id, disp_id});
        if (it == impl_->handlers.end()) return;
        std::erase_if(it->second, [&](const HandlerEntry& h) { return h.token == token; });
        if (!it->second.empty()) return;
        impl_->handlers.erase(it);
        if (impl_->closed) return;
    }
    impl_->post(MsgType::Subscribe, SubscribeMsg{object_id, event, false}.encode());
}

std::uint32_t Session::release(const ObjectRef& ref) {
    auto reply = impl_->request(MsgType::Release, ReleaseMsg{ref.id}.encode());
    return ReleaseAckMsg::decode(reply.payload).remaining;
}

void Session::release_async(std::uint64_t object_id) { impl_->post(MsgType::Release, ReleaseMsg{object_id}.encode()); }

std::string Session::reflect() {
    auto reply = impl_->request(MsgType::Reflect, {});
    return ReflectAckMsg::decode(reply.payload).idl;
}

std::chrono::microseconds Session::ping() {
    auto start = Clock::now();
    ByteWriter w;
    w.u64(static_cast<std::uint64_t>(start.time_since_epoch().count()));
    impl_->request(MsgType::Ping, w.take());
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
}

void Session::close() {
    {
        std::lock_guard lock(impl_->mu);
        if (impl_->closing) return;
        impl_->closing = true;
    }
    try {
        impl_->request(MsgType::Bye, {}, {}, std::chrono::milliseconds(3000));
    } catch (const std::exception&) {
    }
    impl_->shutdown_and_join();
}

}  // namespace sume::orb
