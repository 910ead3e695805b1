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

#include <openssl/evp.h>

#include <algorithm>

#include "json.hpp"
#include "sume/proxygen/proxygen.hpp"

namespace sume::proxygen {

using nlohmann::json;

namespace {

MemberKind kind_of(typelib::MemberRole role) {
    switch (role) {
        case typelib::MemberRole::Getter: return MemberKind::Get;
        case typelib::MemberRole::Setter: return MemberKind::Set;
        case typelib::MemberRole::Method: return MemberKind::Method;
        case typelib::MemberRole::Event: return MemberKind::Event;
    }
    return MemberKind::Method;
}

MemberKind kind_from_name(const std::string& name) {
    if (name == "get") return MemberKind::Get;
    if (name == "set") return MemberKind::Set;
    if (name == "method") return MemberKind::Method;
    if (name == "event") return MemberKind::Event;
    throw std::invalid_argument("unknown member kind '" + name + "'");
}

// nlohmann::json keeps object keys in a std::map, so dump() is already
// sorted; everything below only has to keep arrays in a stable order.
json to_document(const ProxyManifest& m) {
    json doc;
    doc["library"] = m.library_name;
    doc["version"] = std::to_string(m.library_version.major) + "." + std::to_string(m.library_version.minor);

    doc["enums"] = json::array();
    for (const auto& e : m.enums) {
        json values = json::object();
        for (const auto& [name, value] : e.values) values[name] = value;
        doc["enums"].push_back({{"name", e.name}, {"values", values}});
    }

    doc["interfaces"] = json::array();
    for (const auto& iface : m.interfaces) {
        json members = json::array();
        for (const auto& mem : iface.members) {
            json types = json::array();
            json names = json::array();
            for (const auto& p : mem.params) {
                types.push_back(p.type);
                names.push_back(p.name);
            }
            members.push_back({{"name", mem.name},
                               {"dispId", mem.disp_id},
                               {"kind", kind_name(mem.kind)},
                               {"params", types},
                               {"paramNames", names},
                               {"returnType", mem.return_type}});
        }
        doc["interfaces"].push_back({{"name", iface.name}, {"members", members}});
    }

    doc["coclasses"] = json::array();
    for (const auto& co : m.coclasses) {
        doc["coclasses"].push_back({{"name", co.name},
                                    {"progId", co.prog_id},
                                    {"defaultInterface", co.default_interface},
                                    {"interfaces", co.interfaces}});
    }
    return doc;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xf];
    }
    return out;
}

}  // namespace

std::string_view kind_name(MemberKind kind) {
    switch (kind) {
        case MemberKind::Get: return "get";
        case MemberKind::Set: return "set";
        case MemberKind::Method: return "method";
        case MemberKind::Event: return "event";
    }
    return "?";
}

const ManifestInterface* ProxyManifest::find_interface(std::string_view name) const {
    auto it = std::find_if(interfaces.begin(), interfaces.end(), [&](const auto& i) { return i.name == name; });
    return it == interfaces.end() ? nullptr : &*it;
}

bool ProxyManifest::is_enum(std::string_view type) const {
    return std::any_of(enums.begin(), enums.end(), [&](const auto& e) { return e.name == type; });
}

bool ProxyManifest::is_interface(std::string_view type) const { return find_interface(type) != nullptr; }

std::string compute_hash(const ProxyManifest& manifest) {
    return "sha256:" + sha256_hex(to_document(manifest).dump());
}

ProxyManifest generate_manifest(const typelib::TypeLibrary& lib) {
    ProxyManifest m;
    m.library_name = lib.name;
    m.library_version = lib.version;
    for (const auto& e : lib.enums) {
        ManifestEnum me{e.name, {}};
        for (const auto& v : e.values) me.values.emplace_back(v.name, v.value);
        m.enums.push_back(std::move(me));
    }
    for (const auto& iface : lib.interfaces) {
        ManifestInterface mi{iface.name, {}};
        for (const auto& entry : iface.dispatch) {
            typelib::Signature sig = iface.signature_of(entry);
            ManifestMember mem{entry.name, entry.disp_id, kind_of(entry.role), {}, sig.return_type.spelling()};
            for (const auto& p : sig.params) mem.params.push_back({p.name, p.type.spelling()});
            mi.members.push_back(std::move(mem));
        }
        m.interfaces.push_back(std::move(mi));
    }
    for (const auto& co : lib.coclasses) {
        m.coclasses.push_back({co.name, co.prog_id, co.default_interface(), co.interfaces});
    }
    m.hash = compute_hash(m);
    return m;
}

std::string to_json(const ProxyManifest& manifest) {
    json doc = to_document(manifest);
    doc["hash"] = manifest.hash;
    return doc.dump(2) + "\n";
}

ProxyManifest manifest_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("manifest is not valid JSON: ") + e.what());
    }
    ProxyManifest m;
    try {
        m.library_name = doc.at("library").get<std::string>();
        std::string version = doc.at("version").get<std::string>();
        auto dot = version.find('.');
        if (dot == std::string::npos) throw std::invalid_argument("bad version '" + version + "'");
        m.library_version = {std::stoi(version.substr(0, dot)), std::stoi(version.substr(dot + 1))};
        for (const auto& e : doc.at("enums")) {
            ManifestEnum me{e.at("name").get<std::string>(), {}};
            for (const auto& [k, v] : e.at("values").items()) me.values.emplace_back(k, v.get<std::int32_t>());
            std::sort(me.values.begin(), me.values.end(),
                      [](const auto& a, const auto& b) { return a.second < b.second; });
            m.enums.push_back(std::move(me));
        }
        for (const auto& i : doc.at("interfaces")) {
            ManifestInterface mi{i.at("name").get<std::string>(), {}};
            for (const auto& mem : i.at("members")) {
                ManifestMember mm{mem.at("name").get<std::string>(), mem.at("dispId").get<std::uint32_t>(),
                                  kind_from_name(mem.at("kind").get<std::string>()), {},
                                  mem.at("returnType").get<std::string>()};
                const auto& types = mem.at("params");
                const auto& names = mem.at("paramNames");
                if (types.size() != names.size()) throw std::invalid_argument("params/paramNames length mismatch");
                for (std::size_t k = 0; k < types.size(); ++k) {
                    mm.params.push_back({names[k].get<std::string>(), types[k].get<std::string>()});
                }
                mi.members.push_back(std::move(mm));
            }
            m.interfaces.push_back(std::move(mi));
        }
        for (const auto& c : doc.at("coclasses")) {
            m.coclasses.push_back({c.at("name").get<std::string>(), c.at("progId").get<std::string>(),
                                   c.at("defaultInterface").get<std::string>(),
                                   c.at("interfaces").get<std::vector<std::string>>()});
        }
        m.hash = doc.at("hash").get<std::string>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
    }
    if (compute_hash(m) != m.hash) throw std::invalid_argument("manifest hash does not match its content");
    return m;
}

typelib::TypeLibrary reverse_generate(const RegistrationMetadata& registry) {
    if (registry.coclasses.empty()) throw ReverseGenerationError("registry has no registered coclasses");
    typelib::TypeLibrary draft;
    draft.name = registry.library_name;
    draft.version = registry.library_version;
    draft.enums = registry.enums;
    draft.interfaces = registry.interfaces;
    draft.coclasses = registry.coclasses;
    auto built = typelib::build_library(std::move(draft));
    if (!built.ok()) {
        std::string msg = "registry metadata does not form a valid library:";
        for (const auto& d : built.diagnostics) msg += "\n  " + d.to_string();
        throw ReverseGenerationError(msg);
    }
    return std::move(*built.library);
}

}  // namespace sume::proxygen
