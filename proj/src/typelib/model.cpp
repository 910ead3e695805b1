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

#include "sume/typelib/model.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace sume::typelib {

namespace {

constexpr std::array<std::pair<std::string_view, TypeRef::Kind>, 8> kPrimitives{{
    {"void", TypeRef::Kind::Void},
    {"bool", TypeRef::Kind::Bool},
    {"i2", TypeRef::Kind::I2},
    {"i4", TypeRef::Kind::I4},
    {"i8", TypeRef::Kind::I8},
    {"r4", TypeRef::Kind::R4},
    {"r8", TypeRef::Kind::R8},
    {"string", TypeRef::Kind::String},
}};

}  // namespace

std::optional<TypeRef::Kind> primitive_from_keyword(std::string_view word) {
    for (const auto& [kw, kind] : kPrimitives) {
        if (kw == word) return kind;
    }
    return std::nullopt;
}

std::string_view primitive_keyword(TypeRef::Kind kind) {
    for (const auto& [kw, k] : kPrimitives) {
        if (k == kind) return kw;
    }
    return {};
}

std::string TypeRef::spelling() const {
    if (is_primitive()) return std::string(primitive_keyword(kind));
    return name;
}

const std::string& member_name(const MemberDef& member) {
    return std::visit([](const auto& m) -> const std::string& { return m.name; }, member);
}

std::string_view role_name(MemberRole role) {
    switch (role) {
        case MemberRole::Getter: return "get";
        case MemberRole::Setter: return "set";
        case MemberRole::Method: return "method";
        case MemberRole::Event: return "event";
    }
    return "?";
}

const DispatchEntry* InterfaceDef::find_dispatch(std::uint32_t disp_id) const {
    if (disp_id == 0 || disp_id > dispatch.size()) return nullptr;
    return &dispatch[disp_id - 1];
}

const DispatchEntry* InterfaceDef::find_dispatch(std::string_view expanded_name) const {
    auto it = std::find_if(dispatch.begin(), dispatch.end(),
                           [&](const DispatchEntry& e) { return e.name == expanded_name; });
    return it == dispatch.end() ? nullptr : &*it;
}

const EventDef* InterfaceDef::find_event(std::string_view n) const {
    for (const auto& m : members) {
        if (const auto* ev = std::get_if<EventDef>(&m); ev && ev->name == n) return ev;
    }
    return nullptr;
}

Signature InterfaceDef::signature_of(const DispatchEntry& entry) const {
    const MemberDef& member = members.at(entry.member_index);
    switch (entry.role) {
        case MemberRole::Getter:
            return {{}, std::get<PropertyDef>(member).value_type};
        case MemberRole::Setter:
            return {{Param{"value", std::get<PropertyDef>(member).value_type}},
                    TypeRef::primitive(TypeRef::Kind::Void)};
        case MemberRole::Method: {
            const auto& m = std::get<MethodDef>(member);
            return {m.params, m.return_type};
        }
        case MemberRole::Event:
            return {std::get<EventDef>(member).params, TypeRef::primitive(TypeRef::Kind::Void)};
    }
    return {};
}

const InterfaceDef* TypeLibrary::find_interface(std::string_view n) const {
    auto it = std::find_if(interfaces.begin(), interfaces.end(),
                           [&](const InterfaceDef& i) { return i.name == n; });
    return it == interfaces.end() ? nullptr : &*it;
}

const EnumDef* TypeLibrary::find_enum(std::string_view n) const {
    auto it = std::find_if(enums.begin(), enums.end(), [&](const EnumDef& e) { return e.name == n; });
    return it == enums.end() ? nullptr : &*it;
}

const CoclassDef* TypeLibrary::find_coclass_by_prog_id(std::string_view prog_id) const {
    auto it = std::find_if(coclasses.begin(), coclasses.end(),
                           [&](const CoclassDef& c) { return c.prog_id == prog_id; });
    return it == coclasses.end() ? nullptr : &*it;
}

void assign_dispatch(InterfaceDef& iface) {
    iface.dispatch.clear();
    std::uint32_t next = 1;
    for (std::size_t i = 0; i < iface.members.size(); ++i) {
        const MemberDef& member = iface.members[i];
        if (const auto* prop = std::get_if<PropertyDef>(&member)) {
            iface.dispatch.push_back({next++, "get_" + prop->name, MemberRole::Getter, i});
            if (!prop->readonly) {
                iface.dispatch.push_back({next++, "set_" + prop->name, MemberRole::Setter, i});
            }
        } else if (const auto* method = std::get_if<MethodDef>(&member)) {
            iface.dispatch.push_back({next++, method->name, MemberRole::Method, i});
        } else {
            iface.dispatch.push_back({next++, std::get<EventDef>(member).name, MemberRole::Event, i});
        }
    }
}

}  // namespace sume::typelib
