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

#include "sume/orb/server.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <list>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "sume/orb/protocol.hpp"

namespace sume::orb {

namespace {

using Clock = std::chrono::steady_clock;
using typelib::TypeRef;

std::string hex_byte(std::uint8_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    return std::string("0x") + digits[v >> 4] + digits[v & 15];
}

bool tag_matches(const TypeRef& type, Tag tag) {
    switch (type.kind) {
        case TypeRef::Kind::Void: return tag == Tag::Void;
        case TypeRef::Kind::Bool: return tag == Tag::Bool;
        case TypeRef::Kind::I2: return tag == Tag::I2;
        case TypeRef::Kind::I4:
        case TypeRef::Kind::Enum: return tag == Tag::I4;
        case TypeRef::Kind::I8: return tag == Tag::I8;
        case TypeRef::Kind::R4: return tag == Tag::R4;
        case TypeRef::Kind::R8: return tag == Tag::R8;
        case TypeRef::Kind::String: return tag == Tag::String;
        case TypeRef::Kind::Interface: return tag == Tag::ObjRef || tag == Tag::Null;
    }
    return false;
}

std::string expected_tag(const TypeRef& type) {
    switch (type.kind) {
        case TypeRef::Kind::Enum: return "I4";
        case TypeRef::Kind::Interface: return "OBJREF";
        case TypeRef::Kind::Void: return "VOID";
        case TypeRef::Kind::Bool: return "BOOL";
        case TypeRef::Kind::I2: return "I2";
        case TypeRef::Kind::I4: return "I4";
        case TypeRef::Kind::I8: return "I8";
        case TypeRef::Kind::R4: return "R4";
        case TypeRef::Kind::R8: return "R8";
        case TypeRef::Kind::String: return "STRING";
    }
    return "?";
}

struct Fail {
    FaultCode code;
    std::string message;
};

}  // namespace

class ServerSession;

class ServerCore : public EventSink, public std::enable_shared_from_this<ServerCore> {
public:
    ServerCore(std::shared_ptr<const Registry> reg, ServerOptions opts)
        : registry(std::move(reg)), options(std::move(opts)) {}

    void deliver(const Component& source, std::string_view event, const std::vector<WireValue>& args) override;

    void start_session(std::unique_ptr<ByteStream> stream);
    void session_finished();
    void stop_all();
    void log(const std::string& line) const {
        if (options.log) options.log(line);
    }

    /// REFLECT payload, computed on first use.
    const std::string& reflected_idl(std::string& error);

    std::shared_ptr<const Registry> registry;
    ServerOptions options;

    // Serializes component calls and all reference-count changes.
    std::mutex dispatch_mu;
    std::unordered_map<std::uint64_t, std::uint32_t> global_refs;

    struct Worker {
        std::shared_ptr<ServerSession> session;
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> done;
    };
    mutable std::mutex sessions_mu;
    std::condition_variable sessions_cv;
    std::list<Worker> workers;
    bool stopping = false;

    std::atomic<std::uint64_t> frames{0};
    std::atomic<std::uint64_t> protocol_faults{0};

private:
    std::once_flag reflect_once_;
    std::string reflect_idl_;
    std::string reflect_error_;
};

class ServerSession : public std::enable_shared_from_this<ServerSession> {
public:
    ServerSession(std::shared_ptr<ServerCore> core, std::unique_ptr<ByteStream> stream)
        : core_(std::move(core)), stream_(std::move(stream)) {}

    void run();
    void shutdown() { stream_->shutdown(); }

    void deliver_event(std::uint64_t instance_id, std::uint32_t disp_id, const std::vector<WireValue>& args);

private:
    struct Entry {
        ComponentPtr object;
        std::uint32_t refs = 0;
    };

    void writer_loop();
    void enqueue(MsgType type, std::uint32_t correlation, std::vector<std::uint8_t> payload);
    void close_outbound();
    void send_fault(std::uint32_t correlation, FaultCode code, const std::string& message,
                    const std::string& detail = {});

    bool handshake();
    bool handle(const Frame& frame);
    void on_activate(const Frame& frame);
    void on_invoke(const Frame& frame);
    void on_get_id(const Frame& frame);
    void on_subscribe(const Frame& frame);
    void on_release(const Frame& frame);
    void on_reflect(const Frame& frame);

    // The helpers below require dispatch_mu.
    ComponentPtr lookup(std::uint64_t object_id);
    ObjectRef export_object(const ComponentPtr& object);
    void drop_reference(const ComponentPtr& object, std::uint32_t count);
    void release_all();

    std::shared_ptr<ServerCore> core_;
    std::unique_ptr<ByteStream> stream_;
    std::thread writer_;

    std::mutex out_mu_;
    std::condition_variable out_cv_;
    std::deque<std::vector<std::uint8_t>> out_;
    std::size_t out_bytes_ = 0;
    bool out_closed_ = false;
    bool writing_ = false;

    std::mutex mu_;
    std::map<std::uint64_t, Entry> objects_;
    std::unordered_map<std::uint64_t, std::uint64_t> by_instance_;
    std::set<std::pair<std::uint64_t, std::uint32_t>> subscriptions_;
    std::uint64_t next_object_id_ = 1;

    bool bye_ = false;
    std::uint32_t bye_correlation_ = 0;
};

// ---- ServerCore ----

void ServerCore::deliver(const Component& source, std::string_view event, const std::vector<WireValue>& args) {
    const auto* iface = registry->find_interface(source.interface_name());
    const auto* entry = iface ? iface->find_dispatch(event) : nullptr;
    if (!entry || entry->role != typelib::MemberRole::Event) {
        log("dropping unknown event " + std::string(event) + " from " + source.interface_name());
        return;
    }
    std::lock_guard lock(sessions_mu);
    for (auto& w : workers) w.session->deliver_event(source.instance_id(), entry->disp_id, args);
}

void ServerCore::start_session(std::unique_ptr<ByteStream> stream) {
    std::lock_guard lock(sessions_mu);
    for (auto it = workers.begin(); it != workers.end();) {
        if (it->done->load()) {
            it->thread.join();
            it = workers.erase(it);
        } else {
            ++it;
        }
    }
    if (stopping) {
        stream->shutdown();
        return;
    }
    auto session = std::make_shared<ServerSession>(shared_from_this(), std::move(stream));
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::thread t([session, done, self = shared_from_this()] {
        session->run();
        {
            std::lock_guard lock(self->sessions_mu);
            done->store(true);
        }
        self->sessions_cv.notify_all();
    });
    workers.push_back(Worker{std::move(session), std::move(t), std::move(done)});
}

void ServerCore::stop_all() {
    std::list<Worker> all;
    {
        std::unique_lock lock(sessions_mu);
        stopping = true;
        for (auto& w : workers) w.session->shutdown();
        sessions_cv.wait(lock, [&] {
            for (auto& w : workers) {
                if (!w.done->load()) return false;
            }
            return true;
        });
        all.swap(workers);
    }
    for (auto& w : all) w.thread.join();
}

const std::string& ServerCore::reflected_idl(std::string& error) {
    std::call_once(reflect_once_, [this] {
        try {
            reflect_idl_ = typelib::emit_idl(proxygen::reverse_generate(registry->describe()));
        } catch (const std::exception& e) {
            reflect_error_ = e.what();
        }
    });
    error = reflect_error_;
    return reflect_idl_;
}

// ---- ServerSession: outbound ----

void ServerSession::enqueue(MsgType type, std::uint32_t correlation, std::vector<std::uint8_t> payload) {
    std::vector<std::uint8_t> bytes;
    try {
        bytes = encode_frame(Frame{static_cast<std::uint8_t>(type), correlation, std::move(payload)});
    } catch (const EncodeError& e) {
        core_->log(std::string("cannot encode reply: ") + e.what());
        if (type != MsgType::Fault) send_fault(correlation, FaultCode::AppFault, "reply too large");
        return;
    }
    {
        std::lock_guard lock(out_mu_);
        if (out_closed_) return;
        if (out_bytes_ + bytes.size() > core_->options.max_outbound_bytes) {
            core_->log("disconnecting " + stream_->peer() + ": outbound backlog exceeded");
            out_closed_ = true;
            out_.clear();
            out_bytes_ = 0;
            stream_->shutdown();
            out_cv_.notify_all();
            return;
        }
        out_bytes_ += bytes.size();
        out_.push_back(std::move(bytes));
    }
    out_cv_.notify_all();
}

void ServerSession::writer_loop() {
    for (;;) {
        std::vector<std::uint8_t> next;
        {
            std::unique_lock lock(out_mu_);
            out_cv_.wait(lock, [&] { return out_closed_ || !out_.empty(); });
            if (out_.empty()) return;
            next = std::move(out_.front());
            out_.pop_front();
            out_bytes_ -= next.size();
            writing_ = true;
        }
        try {
            stream_->write_all(next);
        } catch (const std::exception&) {
            std::lock_guard lock(out_mu_);
            writing_ = false;
            out_closed_ = true;
            out_.clear();
            out_bytes_ = 0;
            out_cv_.notify_all();
            stream_->shutdown();
            return;
        }
        {
            std::lock_guard lock(out_mu_);
            writing_ = false;
        }
        out_cv_.notify_all();
    }
}

void ServerSession::close_outbound() {
    {
        std::unique_lock lock(out_mu_);
        // Give queued replies (a final FAULT or BYE) a chance to reach the peer.
        out_cv_.wait_for(lock, std::chrono::seconds(2), [&] { return out_closed_ || (out_.empty() && !writing_); });
        out_closed_ = true;
    }
    out_cv_.notify_all();
    stream_->shutdown();
    if (writer_.joinable()) writer_.join();
}

void ServerSession::send_fault(std::uint32_t correlation, FaultCode code, const std::string& message,
                               const std::string& detail) {
    if (code == FaultCode::Protocol) core_->protocol_faults++;
    enqueue(MsgType::Fault, correlation, FaultMsg{static_cast<std::uint32_t>(code), message, detail}.encode());
}

// ---- ServerSession: main loop ----

void ServerSession::run() {
    writer_ = std::thread([this] { writer_loop(); });
    try {
        if (handshake()) {
            for (;;) {
                auto r = read_frame(*stream_, std::nullopt, core_->options.frame_deadline);
                if (r.kind == ReadOutcome::Kind::Eof) break;
                if (r.kind == ReadOutcome::Kind::Oversized) {
                    send_fault(0, FaultCode::Protocol,
                               "frame length " + std::to_string(r.declared_length) + " exceeds limit");
                    break;
                }
                if (r.kind == ReadOutcome::Kind::Malformed) {
                    send_fault(0, FaultCode::Protocol, "frame shorter than its header");
                    continue;
                }
                core_->frames++;
                if (!handle(r.frame)) break;
            }
        }
    } catch (const TransportError& e) {
        core_->log("session " + stream_->peer() + ": " + e.what());
    } catch (const std::exception& e) {
        core_->log("session " + stream_->peer() + " failed: " + e.what());
    }
    {
        std::lock_guard lock(core_->dispatch_mu);
        release_all();
    }
    if (bye_) enqueue(MsgType::Bye, bye_correlation_, {});
    close_outbound();
}

bool ServerSession::handshake() {
    auto deadline = Clock::now() + core_->options.handshake_timeout;
    for (;;) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (left.count() <= 0) return false;
        auto r = read_frame(*stream_, left, core_->options.frame_deadline);
        if (r.kind == ReadOutcome::Kind::Eof || r.kind == ReadOutcome::Kind::Oversized) return false;
        if (r.kind == ReadOutcome::Kind::Malformed) {
            send_fault(0, FaultCode::Protocol, "frame shorter than its header");
            continue;
        }
        core_->frames++;
        const Frame& f = r.frame;
        if (f.msg() != MsgType::Hello) {
            send_fault(f.correlation, FaultCode::Protocol,
                       "expected HELLO, got " + std::string(msg_type_name(f.type)) + " (" + hex_byte(f.type) + ")");
            continue;
        }
        HelloMsg hello;
        try {
            hello = HelloMsg::decode(f.payload);
        } catch (const DecodeError& e) {
            send_fault(f.correlation, FaultCode::Protocol, std::string("malformed HELLO: ") + e.what());
            continue;
        }
        if (hello.version == 0) {
            send_fault(f.correlation, FaultCode::Protocol, "unsupported protocol version 0");
            return false;
        }
        if (!core_->options.token.empty() && hello.token != core_->options.token) {
            enqueue(MsgType::Fault, f.correlation,
                    FaultMsg{static_cast<std::uint32_t>(FaultCode::AccessDenied), "invalid or missing token", {}}
                        .encode());
            return false;
        }
        HelloAckMsg ack{std::min(hello.version, kProtocolVersion), core_->options.name};
        enqueue(MsgType::HelloAck, f.correlation, ack.encode());
        return true;
    }
}

bool ServerSession::handle(const Frame& frame) {
    try {
        switch (frame.msg()) {
            case MsgType::Activate: on_activate(frame); return true;
            case MsgType::Invoke: on_invoke(frame); return true;
            case MsgType::GetId: on_get_id(frame); return true;
            case MsgType::Subscribe: on_subscribe(frame); return true;
            case MsgType::Release: on_release(frame); return true;
            case MsgType::Reflect:
                ByteReader(frame.payload).expect_end();
                on_reflect(frame);
                return true;
            case MsgType::Ping: enqueue(MsgType::Pong, frame.correlation, frame.payload); return true;
            case MsgType::Bye:
                bye_ = true;
                bye_correlation_ = frame.correlation;
                return false;
            case MsgType::Hello:
                send_fault(frame.correlation, FaultCode::Protocol, "session already established");
                return true;
            default:
                send_fault(frame.correlation, FaultCode::Protocol,
                           "unexpected message type " + hex_byte(frame.type));
                return true;
        }
    } catch (const DecodeError& e) {
        send_fault(frame.correlation, FaultCode::Protocol,
                   "malformed " + std::string(msg_type_name(frame.type)) + " payload: " + e.what());
    } catch (const EncodeError& e) {
        send_fault(frame.correlation, FaultCode::AppFault, std::string("cannot encode result: ") + e.what());
    }
    return true;
}

ComponentPtr ServerSession::lookup(std::uint64_t object_id) {
    std::lock_guard lock(mu_);
    auto it = objects_.find(object_id);
    if (it == objects_.end() || !it->second.object->alive()) return nullptr;
    return it->second.object;
}

ObjectRef ServerSession::export_object(const ComponentPtr& object) {
    object->attach(core_);
    std::uint64_t id;
    {
        std::lock_guard lock(mu_);
        auto found = by_instance_.find(object->instance_id());
        if (found != by_instance_.end()) {
            id = found->second;
            objects_[id].refs++;
        } else {
            id = next_object_id_++;
            objects_[id] = Entry{object, 1};
            by_instance_[object->instance_id()] = id;
        }
    }
    core_->global_refs[object->instance_id()]++;
    return ObjectRef{id, object->interface_name()};
}

void ServerSession::drop_reference(const ComponentPtr& object, std::uint32_t count) {
    auto it = core_->global_refs.find(object->instance_id());
    if (it == core_->global_refs.end()) return;
    it->second -= std::min(it->second, count);
    if (it->second > 0) return;
    core_->global_refs.erase(it);
    try {
        object->on_final_release();
    } catch (const std::exception& e) {
        core_->log(object->interface_name() + " final release failed: " + e.what());
    }
}

void ServerSession::release_all() {
    std::map<std::uint64_t, Entry> objects;
    {
        std::lock_guard lock(mu_);
        objects.swap(objects_);
        by_instance_.clear();
        subscriptions_.clear();
    }
    for (auto& [id, entry] : objects) drop_reference(entry.object, entry.refs);
}

void ServerSession::on_activate(const Frame& frame) {
    auto msg = ActivateMsg::decode(frame.payload);
    std::lock_guard lock(core_->dispatch_mu);
    const auto* coclass = core_->registry->find_coclass(msg.prog_id);
    if (!coclass) {
        send_fault(frame.correlation, FaultCode::ProgIdUnknown, "unknown progId: " + msg.prog_id);
        return;
    }
    ComponentPtr object;
    try {
        object = core_->registry->create(msg.prog_id);
    } catch (const ComException& e) {
        send_fault(frame.correlation, e.code(), e.what(), e.detail());
        return;
    } catch (const std::exception& e) {
        send_fault(frame.correlation, FaultCode::AppFault, e.what());
        return;
    }
    if (!object || object->interface_name() != coclass->default_interface()) {
        send_fault(frame.correlation, FaultCode::AppFault,
                   "factory for " + msg.prog_id + " did not produce a " + coclass->default_interface());
        return;
    }
    enqueue(MsgType::ActivateAck, frame.correlation, ObjectRefMsg{export_object(object)}.encode());
}

void ServerSession::on_invoke(const Frame& frame) {
    auto msg = InvokeMsg::decode(frame.payload);
    std::lock_guard lock(core_->dispatch_mu);

    auto fail = [&](FaultCode code, const std::string& message, const std::string& detail = {}) {
        send_fault(frame.correlation, code, message, detail);
    };

    ComponentPtr target = lookup(msg.object_id);
    if (!target) return fail(FaultCode::ObjectNotFound, "object " + std::to_string(msg.object_id) + " not found");
    const auto* iface = core_->registry->find_interface(target->interface_name());
    if (!iface) return fail(FaultCode::AppFault, "interface " + target->interface_name() + " is not registered");
    const auto* entry = iface->find_dispatch(msg.disp_id);
    if (!entry) {
        return fail(FaultCode::MemberNotFound,
                    "no member with dispId " + std::to_string(msg.disp_id) + " on " + iface->name);
    }
    if (entry->role == typelib::MemberRole::Event) {
        return fail(FaultCode::MemberNotFound, entry->name + " is an event and can not be invoked");
    }
    auto sig = iface->signature_of(*entry);
    if (msg.args.size() != sig.params.size()) {
        return fail(FaultCode::TypeMismatch, entry->name + " expects " + std::to_string(sig.params.size()) +
                                                 " argument(s), got " + std::to_string(msg.args.size()));
    }
    std::vector<ComponentPtr> objects(msg.args.size());
    for (std::size_t i = 0; i < msg.args.size(); ++i) {
        const auto& p = sig.params[i];
        const auto& v = msg.args[i];
        if (!tag_matches(p.type, v.tag())) {
            return fail(FaultCode::TypeMismatch, entry->name + " argument " + std::to_string(i + 1) + " (" + p.name +
                                                     "): expected " + expected_tag(p.type) + ", got " +
                                                     std::string(tag_name(v.tag())));
        }
        if (v.tag() == Tag::ObjRef) {
            objects[i] = lookup(v.as_objref().id);
            if (!objects[i]) {
                return fail(FaultCode::ObjectNotFound, "argument object " + std::to_string(v.as_objref().id) +
                                                           " not found");
            }
            if (objects[i]->interface_name() != p.type.name) {
                return fail(FaultCode::TypeMismatch, entry->name + " argument " + std::to_string(i + 1) + " (" +
                                                         p.name + "): expected " + p.type.name + ", got " +
                                                         objects[i]->interface_name());
            }
        }
    }
    const Handler* handler = target->find_handler(entry->name);
    if (!handler) return fail(FaultCode::MemberNotFound, iface->name + "." + entry->name + " is not implemented");

    Reply reply;
    try {
        reply = (*handler)(CallArgs(std::move(msg.args), std::move(objects)));
    } catch (const ComException& e) {
        return fail(e.code(), e.what(), e.detail());
    } catch (const std::exception& e) {
        return fail(FaultCode::AppFault, e.what());
    }

    WireValue result;
    const TypeRef& ret = sig.return_type;
    if (reply.is_object()) {
        if (ret.kind != TypeRef::Kind::Interface) {
            return fail(FaultCode::AppFault, entry->name + " returned an object for " + ret.spelling());
        }
        if (!reply.object()) {
            result = WireValue::null();
        } else if (reply.object()->interface_name() != ret.name) {
            return fail(FaultCode::AppFault,
                        entry->name + " returned " + reply.object()->interface_name() + ", expected " + ret.name);
        } else {
            result = WireValue::objref(export_object(reply.object()));
        }
    } else {
        result = reply.value();
        bool ok = ret.kind == TypeRef::Kind::Interface ? result.is_null() : tag_matches(ret, result.tag());
        if (!ok) {
            return fail(FaultCode::AppFault, entry->name + " returned " + std::string(tag_name(result.tag())) +
                                                 ", expected " + expected_tag(ret));
        }
    }
    enqueue(MsgType::Result, frame.correlation, ResultMsg{std::move(result)}.encode());
}

void ServerSession::on_get_id(const Frame& frame) {
    auto msg = GetIdMsg::decode(frame.payload);
    std::lock_guard lock(core_->dispatch_mu);
    ComponentPtr target = lookup(msg.object_id);
    if (!target) {
        send_fault(frame.correlation, FaultCode::ObjectNotFound,
                   "object " + std::to_string(msg.object_id) + " not found");
        return;
    }
    const auto* iface = core_->registry->find_interface(target->interface_name());
    const auto* entry = iface ? iface->find_dispatch(msg.name) : nullptr;
    if (!entry) {
        send_fault(frame.correlation, FaultCode::MemberNotFound,
                   "unknown member " + msg.name + " on " + target->interface_name());
        return;
    }
    enqueue(MsgType::GetIdAck, frame.correlation, DispIdMsg{entry->disp_id}.encode());
}

void ServerSession::on_subscribe(const Frame& frame) {
    auto msg = SubscribeMsg::decode(frame.payload);
    std::lock_guard lock(core_->dispatch_mu);
    ComponentPtr target = lookup(msg.object_id);
    if (!target) {
        send_fault(frame.correlation, FaultCode::ObjectNotFound,
                   "object " + std::to_string(msg.object_id) + " not found");
        return;
    }
    const auto* iface = core_->registry->find_interface(target->interface_name());
    const auto* entry = iface ? iface->find_dispatch(msg.event_name) : nullptr;
    if (!entry || entry->role != typelib::MemberRole::Event) {
        send_fault(frame.correlation, FaultCode::MemberNotFound,
                   "unknown event " + msg.event_name + " on " + target->interface_name());
        return;
    }
    {
        std::lock_guard g(mu_);
        if (msg.enable) {
            subscriptions_.insert({msg.object_id, entry->disp_id});
        } else {
            subscriptions_.erase({msg.object_id, entry->disp_id});
        }
    }
    enqueue(MsgType::SubscribeAck, frame.correlation, DispIdMsg{entry->disp_id}.encode());
}

void ServerSession::on_release(const Frame& frame) {
    auto msg = ReleaseMsg::decode(frame.payload);
    std::lock_guard lock(core_->dispatch_mu);
    ComponentPtr object;
    std::uint32_t remaining = 0;
    {
        std::lock_guard g(mu_);
        auto it = objects_.find(msg.object_id);
        if (it != objects_.end()) {
            object = it->second.object;
            remaining = --it->second.refs;
            if (remaining == 0) {
                by_instance_.erase(object->instance_id());
                objects_.erase(it);
                for (auto s = subscriptions_.begin(); s != subscriptions_.end();) {
                    s = s->first == msg.object_id ? subscriptions_.erase(s) : std::next(s);
                }
            }
        }
    }
    if (!object) {
        send_fault(frame.correlation, FaultCode::ObjectNotFound,
                   "object " + std::to_string(msg.object_id) + " not found");
        return;
    }
    drop_reference(object, 1);
    enqueue(MsgType::ReleaseAck, frame.correlation, ReleaseAckMsg{remaining}.encode());
}

void ServerSession::on_reflect(const Frame& frame) {
    std::string error;
    const std::string& idl = core_->reflected_idl(error);
    if (!error.empty()) {
        send_fault(frame.correlation, FaultCode::AppFault, "reflection unavailable: " + error);
        return;
    }
    enqueue(MsgType::ReflectAck, frame.correlation, ReflectAckMsg{idl}.encode());
}

void ServerSession::deliver_event(std::uint64_t instance_id, std::uint32_t disp_id,
                                  const std::vector<WireValue>& args) {
    std::uint64_t object_id;
    {
        std::lock_guard lock(mu_);
        auto it = by_instance_.find(instance_id);
        if (it == by_instance_.end()) return;
        object_id = it->second;
        if (!subscriptions_.count({object_id, disp_id})) return;
    }
    enqueue(MsgType::Event, 0, EventMsg{object_id, disp_id, args}.encode());
}

// ---- Server ----

Server::Server(std::shared_ptr<const Registry> registry, ServerOptions options) {
    if (!registry || !registry->sealed()) throw RegistryError("server needs a sealed registry");
    core_ = std::make_shared<ServerCore>(std::move(registry), std::move(options));
}

Server::~Server() { stop(); }

void Server::listen(std::unique_ptr<TcpListener> listener) {
    if (listener_) throw std::logic_error("server is already listening");
    listener_ = std::move(listener);
    accept_thread_ = std::thread([this, core = core_] {
        for (;;) {
            {
                std::lock_guard lock(core->sessions_mu);
                if (core->stopping) return;
            }
            auto conn = listener_->accept(std::chrono::milliseconds(200));
            if (conn) core->start_session(std::move(conn));
        }
    });
}

void Server::attach(std::unique_ptr<ByteStream> stream) { core_->start_session(std::move(stream)); }

void Server::stop() {
    {
        std::lock_guard lock(core_->sessions_mu);
        core_->stopping = true;
    }
    if (listener_) listener_->close();
    if (accept_thread_.joinable()) accept_thread_.join();
    core_->stop_all();
}

ServerStats Server::stats() const {
    ServerStats s;
    {
        std::lock_guard lock(core_->sessions_mu);
        for (const auto& w : core_->workers) s.sessions += w.done->load() ? 0 : 1;
    }
    {
        std::lock_guard lock(core_->dispatch_mu);
        s.referenced_instances = core_->global_refs.size();
    }
    s.frames = core_->frames.load();
    s.protocol_faults = core_->protocol_faults.load();
    return s;
}

void Server::with_dispatch_lock(const std::function<void()>& fn) {
    std::lock_guard lock(core_->dispatch_mu);
    fn();
}

}  // namespace sume::orb
