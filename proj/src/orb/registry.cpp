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

#include "sume/orb/registry.hpp"

namespace sume::orb {

Registry::Registry(std::string library_name, typelib::Version version) {
    meta_.library_name = std::move(library_name);
    meta_.library_version = version;
}

Registry Registry::from_library(const typelib::TypeLibrary& lib) {
    Registry reg(lib.name, lib.version);
    for (const auto& e : lib.enums) reg.register_enum(e);
    for (const auto& i : lib.interfaces) reg.register_interface(i);
    for (const auto& c : lib.coclasses) reg.register_coclass(c);
    return reg;
}

void Registry::require_open() const {
    if (sealed()) throw RegistryError("registry is sealed");
}

void Registry::register_enum(typelib::EnumDef def) {
    require_open();
    meta_.enums.push_back(std::move(def));
}

void Registry::register_interface(typelib::InterfaceDef def) {
    require_open();
    meta_.interfaces.push_back(std::move(def));
}

void Registry::register_coclass(typelib::CoclassDef def, Factory factory) {
    require_open();
    if (factory) factories_[def.prog_id] = std::move(factory);
    meta_.coclasses.push_back(std::move(def));
}

void Registry::bind_factory(std::string_view prog_id, Factory factory) {
    require_open();
    for (const auto& c : meta_.coclasses) {
        if (c.prog_id == prog_id) {
            factories_[std::string(prog_id)] = std::move(factory);
            return;
        }
    }
    throw RegistryError("no coclass with progId " + std::string(prog_id));
}

void Registry::seal() {
    require_open();
    typelib::TypeLibrary draft;
    draft.name = meta_.library_name;
    draft.version = meta_.library_version;
    draft.enums = meta_.enums;
    draft.interfaces = meta_.interfaces;
    draft.coclasses = meta_.coclasses;
    auto built = typelib::build_library(std::move(draft));

    std::string problems;
    for (const auto& d : built.diagnostics) problems += "\n  " + d.message;
    for (const auto& c : meta_.coclasses) {
        if (!factories_.count(c.prog_id)) problems += "\n  coclass " + c.name + " (" + c.prog_id + ") has no factory";
    }
    if (!problems.empty()) throw RegistryError("invalid registrations:" + problems);
    library_ = std::move(*built.library);
}

const typelib::TypeLibrary& Registry::library() const {
    if (!library_) throw RegistryError("registry is not sealed");
    return *library_;
}

const typelib::CoclassDef* Registry::find_coclass(std::string_view prog_id) const {
    return library().find_coclass_by_prog_id(prog_id);
}

const typelib::InterfaceDef* Registry::find_interface(std::string_view name) const {
    return library().find_interface(name);
}

ComponentPtr Registry::create(std::string_view prog_id) const {
    auto it = factories_.find(prog_id);
    if (it == factories_.end() || !find_coclass(prog_id)) throw RegistryError("unknown progId: " + std::string(prog_id));
    return it->second();
}

proxygen::RegistrationMetadata Registry::describe() const {
    if (!library_) return meta_;
    proxygen::RegistrationMetadata out;
    out.library_name = library_->name;
    out.library_version = library_->version;
    out.enums = library_->enums;
    out.interfaces = library_->interfaces;
    out.coclasses = library_->coclasses;
    return out;
}

}  // namespace sume::orb
