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

#include <sstream>

#include "sume/typelib/typelib.hpp"

namespace sume::typelib {

namespace {

void emit_params(std::ostringstream& out, const std::vector<Param>& params) {
    out << '(';
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out << ", ";
        out << params[i].type.spelling() << ' ' << params[i].name;
    }
    out << ')';
}

}  // namespace

std::string emit_idl(const TypeLibrary& lib) {
    std::ostringstream out;
    out << "library " << lib.name << " version " << lib.version.major << '.' << lib.version.minor << ";\n";

    for (const auto& e : lib.enums) {
        out << "\nenum " << e.name << " {\n";
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            out << "    " << e.values[i].name << " = " << e.values[i].value;
            out << (i + 1 < e.values.size() ? ",\n" : "\n");
        }
        out << "}\n";
    }

    for (const auto& iface : lib.interfaces) {
        out << "\ninterface " << iface.name << " {\n";
        for (const auto& member : iface.members) {
            out << "    ";
            if (const auto* p = std::get_if<PropertyDef>(&member)) {
                out << "property " << p->value_type.spelling() << ' ' << p->name;
                if (p->readonly) out << " readonly";
            } else if (const auto* m = std::get_if<MethodDef>(&member)) {
                out << "method " << m->return_type.spelling() << ' ' << m->name;
                emit_params(out, m->params);
            } else {
                const auto& ev = std::get<EventDef>(member);
                out << "event " << ev.name;
                emit_params(out, ev.params);
            }
            out << ";\n";
        }
        out << "}\n";
    }

    for (const auto& co : lib.coclasses) {
        out << "\ncoclass " << co.name << " progid \"" << co.prog_id << "\" {\n";
        for (const auto& iface : co.interfaces) out << "    implements " << iface << ";\n";
        out << "}\n";
    }
    return out.str();
}

}  // namespace sume::typelib
