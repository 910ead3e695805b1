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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

/// In-memory model of a type library: the interfaces, properties, methods,
/// events, enums and coclasses a server exposes for remote automation.
///
/// A library is only ever handed out after validation, so consumers may
/// rely on the invariants documented on each type. Two libraries compare
/// equal when they are structurally identical, including member order and
/// the derived dispatch tables.
namespace sume::typelib {

struct TypeRef {
    enum class Kind : std::uint8_t { Void, Bool, I2, I4, I8, R4, R8, String, Enum, Interface };

    Kind kind = Kind::Void;
    /// Set only for Enum and Interface references.
    std::string name;

    static TypeRef primitive(Kind k) { return TypeRef{k, {}}; }
    static TypeRef enumeration(std::string n) { return TypeRef{Kind::Enum, std::move(n)}; }
    static TypeRef interface(std::string n) { return TypeRef{Kind::Interface, std::move(n)}; }

    bool is_primitive() const { return kind != Kind::Enum && kind != Kind::Interface; }
    bool is_void() const { return kind == Kind::Void; }

    /// IDL spelling: the primitive keyword or the referenced name.
    std::string spelling() const;

    friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

/// Maps a primitive keyword ("i4", "string", ...) to its kind.
std::optional<TypeRef::Kind> primitive_from_keyword(std::string_view word);
std::string_view primitive_keyword(TypeRef::Kind kind);

struct Param {
    std::string name;
    TypeRef type;

    friend bool operator==(const Param&, const Param&) = default;
};

struct PropertyDef {
    std::string name;
    TypeRef value_type;
    bool readonly = false;

    friend bool operator==(const PropertyDef&, const PropertyDef&) = default;
};

struct MethodDef {
    std::string name;
    TypeRef return_type;
    std::vector<Param> params;

    friend bool operator==(const MethodDef&, const MethodDef&) = default;
};

struct EventDef {
    std::string name;
    std::vector<Param> params;

    friend bool operator==(const EventDef&, const EventDef&) = default;
};

using MemberDef = std::variant<PropertyDef, MethodDef, EventDef>;

const std::string& member_name(const MemberDef& member);

enum class MemberRole : std::uint8_t { Getter, Setter, Method, Event };

std::string_view role_name(MemberRole role);

/// One row of an interface's dispatch table. Properties are expanded to
/// get_X / set_X here; the grammar never sees those names.
struct DispatchEntry {
    std::uint32_t disp_id = 0;
    std::string name;
    MemberRole role = MemberRole::Method;
    std::size_t member_index = 0;

    friend bool operator==(const DispatchEntry&, const DispatchEntry&) = default;
};

/// Call signature of a dispatch entry after property expansion.
struct Signature {
    std::vector<Param> params;
    TypeRef return_type;
};

struct InterfaceDef {
    std::string name;
    std::vector<MemberDef> members;
    /// Entry i carries dispId i + 1.
    std::vector<DispatchEntry> dispatch;

    const DispatchEntry* find_dispatch(std::uint32_t disp_id) const;
    const DispatchEntry* find_dispatch(std::string_view expanded_name) const;
    const EventDef* find_event(std::string_view name) const;
    Signature signature_of(const DispatchEntry& entry) const;

    friend bool operator==(const InterfaceDef&, const InterfaceDef&) = default;
};

struct Enumerator {
    std::string name;
    std::int32_t value = 0;

    friend bool operator==(const Enumerator&, const Enumerator&) = default;
};

struct EnumDef {
    std::string name;
    std::vector<Enumerator> values;

    friend bool operator==(const EnumDef&, const EnumDef&) = default;
};

struct CoclassDef {
    std::string name;
    std::string prog_id;
    /// Non-empty; front() is the default interface handed out on activation.
    std::vector<std::string> interfaces;

    const std::string& default_interface() const { return interfaces.front(); }

    friend bool operator==(const CoclassDef&, const CoclassDef&) = default;
};

struct Version {
    int major = 1;
    int minor = 0;

    friend bool operator==(const Version&, const Version&) = default;
};

struct TypeLibrary {
    std::string name;
    Version version;
    std::vector<EnumDef> enums;
    std::vector<InterfaceDef> interfaces;
    std::vector<CoclassDef> coclasses;

    const InterfaceDef* find_interface(std::string_view n) const;
    const EnumDef* find_enum(std::string_view n) const;
    const CoclassDef* find_coclass_by_prog_id(std::string_view prog_id) const;

    friend bool operator==(const TypeLibrary&, const TypeLibrary&) = default;
};

/// Assigns dense dispatch ids to every member of `iface`, in declaration
/// order. A read-write property takes two consecutive ids, getter first.
void assign_dispatch(InterfaceDef& iface);

}  // namespace sume::typelib
