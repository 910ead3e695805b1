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

#include "validate.hpp"

#include <map>
#include <set>
#include <string>

namespace sume::typelib::detail {

namespace {

class Validator {
public:
    Validator(TypeLibrary& lib, const SourceMap* map, std::vector<Diagnostic>& out)
        : lib_(lib), map_(map), out_(out) {}

    void run() {
        if (!is_identifier(lib_.name)) error(lib_pos(), "invalid library name '" + lib_.name + "'");
        if (lib_.version.major < 0 || lib_.version.minor < 0) error(lib_pos(), "negative library version");

        collect_top_level_names();
        for (std::size_t i = 0; i < lib_.enums.size(); ++i) check_enum(i);
        for (std::size_t i = 0; i < lib_.interfaces.size(); ++i) check_interface(i);
        check_coclasses();
        for (auto& iface : lib_.interfaces) assign_dispatch(iface);
    }

private:
    Pos lib_pos() const { return map_ ? map_->library : Pos{}; }
    Pos enum_pos(std::size_t e) const { return map_ ? map_->enums.at(e).name : Pos{}; }
    Pos enumerator_pos(std::size_t e, std::size_t v) const {
        return map_ ? map_->enums.at(e).values.at(v) : Pos{};
    }
    Pos iface_pos(std::size_t i) const { return map_ ? map_->interfaces.at(i).name : Pos{}; }
    const MemberPos* member_pos(std::size_t i, std::size_t m) const {
        return map_ ? &map_->interfaces.at(i).members.at(m) : nullptr;
    }
    Pos coclass_pos(std::size_t c) const { return map_ ? map_->coclasses.at(c).name : Pos{}; }

    void error(Pos at, std::string message) {
        out_.push_back(Diagnostic{at.line, at.column, std::move(message)});
    }

    void collect_top_level_names() {
        auto claim = [&](const std::string& name, Pos at) {
            if (!is_identifier(name)) {
                error(at, "invalid identifier '" + name + "'");
            } else if (primitive_from_keyword(name)) {
                error(at, "'" + name + "' is a reserved type name");
            } else if (!top_level_.insert(name).second) {
                error(at, "duplicate name '" + name + "'");
            }
        };
        for (std::size_t i = 0; i < lib_.enums.size(); ++i) claim(lib_.enums[i].name, enum_pos(i));
        for (std::size_t i = 0; i < lib_.interfaces.size(); ++i) claim(lib_.interfaces[i].name, iface_pos(i));
        for (std::size_t i = 0; i < lib_.coclasses.size(); ++i) claim(lib_.coclasses[i].name, coclass_pos(i));
    }

    void check_enum(std::size_t index) {
        const EnumDef& def = lib_.enums[index];
        std::set<std::string> names;
        std::map<std::int32_t, std::string> values;
        for (std::size_t v = 0; v < def.values.size(); ++v) {
            const Enumerator& e = def.values[v];
            Pos at = enumerator_pos(index, v);
            if (!is_identifier(e.name)) error(at, "invalid identifier '" + e.name + "'");
            if (!names.insert(e.name).second) {
                error(at, "duplicate name '" + e.name + "' in enum " + def.name);
            }
            auto [it, fresh] = values.emplace(e.value, e.name);
            if (!fresh) {
                error(at, "enum value collision in " + def.name + ": '" + e.name + "' and '" + it->second +
                              "' are both " + std::to_string(e.value));
            }
        }
    }

    // Resolves a named reference in place. Returns false when unresolved.
    bool resolve(TypeRef& type, Pos at) {
        if (type.is_primitive()) return true;
        if (lib_.find_enum(type.name)) {
            type.kind = TypeRef::Kind::Enum;
            return true;
        }
        if (lib_.find_interface(type.name)) {
            type.kind = TypeRef::Kind::Interface;
            return true;
        }
        error(at, "unresolved type reference '" + type.name + "'");
        return false;
    }

    void check_params(std::vector<Param>& params, const MemberPos* pos, bool allow_interfaces,
                      const std::string& owner) {
        std::set<std::string> seen;
        for (std::size_t p = 0; p < params.size(); ++p) {
            Param& param = params[p];
            Pos at = pos && p < pos->params.size() ? pos->params[p] : Pos{};
            if (!is_identifier(param.name)) error(at, "invalid identifier '" + param.name + "'");
            if (!seen.insert(param.name).second) {
                error(at, "duplicate parameter '" + param.name + "' in " + owner);
            }
            if (param.type.is_void()) {
                error(at, "parameter '" + param.name + "' of " + owner + " cannot be void");
                continue;
            }
            if (resolve(param.type, at) && !allow_interfaces && param.type.kind == TypeRef::Kind::Interface) {
                error(at, "event " + owner + " cannot carry interface-typed parameter '" + param.name + "'");
            }
        }
    }

    void check_interface(std::size_t index) {
        InterfaceDef& iface = lib_.interfaces[index];
        std::map<std::string, std::size_t> names;
        for (std::size_t m = 0; m < iface.members.size(); ++m) {
            const MemberPos* pos = member_pos(index, m);
            Pos at = pos ? pos->name : iface_pos(index);
            const std::string& name = member_name(iface.members[m]);
            if (!is_identifier(name)) error(at, "invalid identifier '" + name + "'");
            if (!names.emplace(name, m).second) {
                error(at, "duplicate member '" + name + "' in interface " + iface.name);
            }
        }
        for (std::size_t m = 0; m < iface.members.size(); ++m) {
            const MemberPos* pos = member_pos(index, m);
            Pos at = pos ? pos->name : iface_pos(index);
            Pos type_at = pos ? pos->type : at;
            std::string owner = iface.name + "." + member_name(iface.members[m]);
            MemberDef& member = iface.members[m];
            if (auto* prop = std::get_if<PropertyDef>(&member)) {
                for (const char* prefix : {"get_", "set_"}) {
                    if (names.count(prefix + prop->name)) {
                        error(at, "property '" + prop->name + "' conflicts with member '" + prefix + prop->name +
                                      "' in interface " + iface.name);
                    }
                }
                if (prop->value_type.is_void()) {
                    error(type_at, "property " + owner + " cannot be void");
                } else {
                    resolve(prop->value_type, type_at);
                }
            } else if (auto* method = std::get_if<MethodDef>(&member)) {
                resolve(method->return_type, type_at);
                check_params(method->params, pos, true, owner);
            } else {
                check_params(std::get<EventDef>(member).params, pos, false, owner);
            }
        }
    }

    void check_coclasses() {
        std::set<std::string> prog_ids;
        for (std::size_t c = 0; c < lib_.coclasses.size(); ++c) {
            const CoclassDef& co = lib_.coclasses[c];
            Pos at = coclass_pos(c);
            Pos prog_at = map_ ? map_->coclasses[c].prog_id : at;
            if (!is_prog_id(co.prog_id)) {
                error(prog_at, "invalid progid \"" + co.prog_id + "\"");
            } else if (!prog_ids.insert(co.prog_id).second) {
                error(prog_at, "duplicate progid \"" + co.prog_id + "\"");
            }
            if (co.interfaces.empty()) error(at, "coclass " + co.name + " implements no interfaces");
            std::set<std::string> seen;
            for (std::size_t i = 0; i < co.interfaces.size(); ++i) {
                Pos impl_at = map_ ? map_->coclasses[c].interfaces.at(i) : at;
                const std::string& name = co.interfaces[i];
                if (!lib_.find_interface(name)) {
                    error(impl_at, "coclass " + co.name + " implements unknown interface '" + name + "'");
                } else if (!seen.insert(name).second) {
                    error(impl_at, "coclass " + co.name + " implements '" + name + "' twice");
                }
            }
        }
    }

    TypeLibrary& lib_;
    const SourceMap* map_;
    std::vector<Diagnostic>& out_;
    std::set<std::string> top_level_;
};

}  // namespace

void validate(TypeLibrary& lib, const SourceMap* map, std::vector<Diagnostic>& out) {
    Validator(lib, map, out).run();
}

}  // namespace sume::typelib::detail
