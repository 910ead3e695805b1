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

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sume/orb/component.hpp"
#include "sume/proxygen/proxygen.hpp"
#include "sume/typelib/typelib.hpp"

namespace sume::orb {

using Factory = std::function<ComponentPtr()>;

class RegistryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The server's catalogue: interfaces, enums and activatable coclasses.
/// Registration order is preserved and becomes declaration order in the
/// reverse-generated library.
class Registry {
public:
    Registry(std::string library_name, typelib::Version version = {});

    /// Registers every enum, interface and coclass of `lib` (without
    /// factories). Handy when booting from an authored `.sidl`.
    static Registry from_library(const typelib::TypeLibrary& lib);

    void register_enum(typelib::EnumDef def);
    void register_interface(typelib::InterfaceDef def);
    void register_coclass(typelib::CoclassDef def, Factory factory = {});

    /// Attaches or replaces the factory of an already registered progId.
    void bind_factory(std::string_view prog_id, Factory factory);

    /// Validates the registrations and assigns dispatch tables. Throws
    /// RegistryError listing every problem, including coclasses without a
    /// factory. No registration is possible afterwards.
    void seal();
    bool sealed() const { return library_.has_value(); }

    /// Valid after seal().
    const typelib::TypeLibrary& library() const;

    const typelib::CoclassDef* find_coclass(std::string_view prog_id) const;
    const typelib::InterfaceDef* find_interface(std::string_view name) const;

    /// Runs the factory. Throws RegistryError for an unknown progId.
    ComponentPtr create(std::string_view prog_id) const;

    proxygen::RegistrationMetadata describe() const;

private:
    void require_open() const;

    proxygen::RegistrationMetadata meta_;
    std::map<std::string, Factory, std::less<>> factories_;
    std::optional<typelib::TypeLibrary> library_;
};

}  // namespace sume::orb
