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

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sume/typelib/typelib.hpp"

/// Both directions of the bridge: client proxy manifests generated from a
/// type library, and a type library recovered from a live server's
/// registration metadata.
namespace sume::proxygen {

enum class MemberKind { Get, Set, Method, Event };

std::string_view kind_name(MemberKind kind);

struct ManifestParam {
    std::string name;
    std::string type;  // IDL spelling

    friend bool operator==(const ManifestParam&, const ManifestParam&) = default;
};

struct ManifestMember {
    std::string name;  // expanded (get_X / set_X for properties)
    std::uint32_t disp_id = 0;
    MemberKind kind = MemberKind::Method;
    std::vector<ManifestParam> params;
    std::string return_type;

    friend bool operator==(const ManifestMember&, const ManifestMember&) = default;
};

struct ManifestInterface {
    std::string name;
    std::vector<ManifestMember> members;  // ascending dispId

    friend bool operator==(const ManifestInterface&, const ManifestInterface&) = default;
};

struct ManifestCoclass {
    std::string name;
    std::string prog_id;
    std::string default_interface;
    std::vector<std::string> interfaces;

    friend bool operator==(const ManifestCoclass&, const ManifestCoclass&) = default;
};

struct ManifestEnum {
    std::string name;
    std::vector<std::pair<std::string, std::int32_t>> values;

    friend bool operator==(const ManifestEnum&, const ManifestEnum&) = default;
};

struct ProxyManifest {
    std::string library_name;
    typelib::Version library_version;
    std::vector<ManifestEnum> enums;
    std::vector<ManifestInterface> interfaces;
    std::vector<ManifestCoclass> coclasses;
    /// "sha256:<hex>" over the canonical document without this field.
    std::string hash;

    const ManifestInterface* find_interface(std::string_view name) const;
    bool is_enum(std::string_view type) const;
    bool is_interface(std::string_view type) const;

    friend bool operator==(const ProxyManifest&, const ProxyManifest&) = default;
};

ProxyManifest generate_manifest(const typelib::TypeLibrary& lib);

/// Canonical JSON: sorted object keys, two-space indent, trailing newline.
std::string to_json(const ProxyManifest& manifest);

/// Inverse of to_json. Throws std::invalid_argument on malformed input or
/// when the embedded hash does not match the content.
ProxyManifest manifest_from_json(std::string_view text);

std::string compute_hash(const ProxyManifest& manifest);

/// What a server knows about the components it hosts; the in-memory analogue
/// of compiled class metadata.
struct RegistrationMetadata {
    std::string library_name;
    typelib::Version library_version;
    std::vector<typelib::EnumDef> enums;
    std::vector<typelib::InterfaceDef> interfaces;
    std::vector<typelib::CoclassDef> coclasses;
};

class ReverseGenerationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

typelib::TypeLibrary reverse_generate(const RegistrationMetadata& registry);

struct StubParam {
    std::string name;
    std::string type;
};

struct StubEntry {
    std::string member;
    std::uint32_t disp_id = 0;
    MemberKind kind = MemberKind::Method;
    std::vector<StubParam> params;
    std::string return_type;
    /// e.g. "set_WindowState(value: i4) -> void dispatches (dispId=2)"
    std::string call_template;
};

struct StubInterface {
    std::string name;
    std::vector<StubEntry> entries;
};

/// Language-neutral rendering input.
struct StubDescription {
    std::string library_name;
    typelib::Version library_version;
    std::string manifest_hash;
    std::vector<ManifestEnum> enums;
    std::vector<StubInterface> interfaces;
    std::vector<ManifestCoclass> coclasses;

    bool is_enum(std::string_view type) const;
    bool is_interface(std::string_view type) const;
};

StubDescription emit_stub_hooks(const ProxyManifest& manifest);

/// Header-only C++ proxies over the client SDK, in namespace
/// sume::proxies::<lowercased library name>.
std::string render_cpp(const StubDescription& stubs);

/// TypeScript proxies over an abstract invoker.
std::string render_typescript(const StubDescription& stubs);

}  // namespace sume::proxygen
