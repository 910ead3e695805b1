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

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "sume/proxygen/proxygen.hpp"

namespace sume::proxygen {

namespace {

std::string param_list(const std::vector<StubParam>& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].name + ": " + params[i].type;
    }
    return out;
}

std::string make_template(const StubEntry& e) {
    const char* verb = e.kind == MemberKind::Event ? "raises" : "dispatches";
    return e.member + "(" + param_list(e.params) + ") -> " + e.return_type + " " + verb +
           " (dispId=" + std::to_string(e.disp_id) + ")";
}

const std::set<std::string>& cpp_keywords() {
    static const std::set<std::string> kw = {
        "alignas", "alignof", "and", "asm", "auto", "bool", "break", "case", "catch", "char", "class", "concept",
        "const", "consteval", "constexpr", "continue", "decltype", "default", "delete", "do", "double", "else",
        "enum", "explicit", "export", "extern", "false", "float", "for", "friend", "goto", "if", "inline", "int",
        "long", "mutable", "namespace", "new", "noexcept", "not", "nullptr", "operator", "or", "private",
        "protected", "public", "register", "requires", "return", "short", "signed", "sizeof", "static",
        "struct", "switch", "template", "this", "throw", "true", "try", "typedef", "typeid", "typename", "union",
        "unsigned", "using", "virtual", "void", "volatile", "while", "xor"};
    return kw;
}

std::string cpp_name(const std::string& name) { return cpp_keywords().count(name) ? name + "_" : name; }

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string cpp_value_type(const StubDescription& d, const std::string& type) {
    if (type == "void") return "void";
    if (type == "bool") return "bool";
    if (type == "i2") return "std::int16_t";
    if (type == "i4") return "std::int32_t";
    if (type == "i8") return "std::int64_t";
    if (type == "r4") return "float";
    if (type == "r8") return "double";
    if (type == "string") return "std::string";
    if (d.is_enum(type)) return "std::int32_t";
    return cpp_name(type);
}

std::string cpp_param_type(const StubDescription& d, const std::string& type) {
    if (type == "string" || d.is_interface(type)) return "const " + cpp_value_type(d, type) + "&";
    return cpp_value_type(d, type);
}

std::string cpp_signature(const StubDescription& d, const StubEntry& e) {
    std::string out = "(";
    for (std::size_t i = 0; i < e.params.size(); ++i) {
        if (i) out += ", ";
        out += cpp_param_type(d, e.params[i].type) + " " + cpp_name(e.params[i].name);
    }
    return out + ")";
}

std::string cpp_args(const StubDescription& d, const StubEntry& e) {
    std::string out = "{";
    for (std::size_t i = 0; i < e.params.size(); ++i) {
        if (i) out += ", ";
        const auto& p = e.params[i];
        if (d.is_interface(p.type)) {
            out += "::sume::client::to_wire(static_cast<const ::sume::client::Proxy&>(" + cpp_name(p.name) + "))";
        } else {
            out += "::sume::client::to_wire(" + cpp_name(p.name) + ")";
        }
    }
    return out + "}";
}

std::string ts_type(const StubDescription& d, const std::string& type) {
    if (type == "void") return "void";
    if (type == "bool") return "boolean";
    if (type == "i8") return "bigint";
    if (type == "string") return "string";
    if (d.is_interface(type)) return type;
    return "number";
}

std::string ts_tag(const StubDescription& d, const std::string& type) {
    if (d.is_enum(type)) return "i4";
    if (d.is_interface(type)) return "objref";
    return type;
}

}  // namespace

bool StubDescription::is_enum(std::string_view type) const {
    return std::any_of(enums.begin(), enums.end(), [&](const auto& e) { return e.name == type; });
}

bool StubDescription::is_interface(std::string_view type) const {
    return std::any_of(interfaces.begin(), interfaces.end(), [&](const auto& i) { return i.name == type; });
}

StubDescription emit_stub_hooks(const ProxyManifest& manifest) {
    StubDescription d;
    d.library_name = manifest.library_name;
    d.library_version = manifest.library_version;
    d.manifest_hash = manifest.hash;
    d.enums = manifest.enums;
    d.coclasses = manifest.coclasses;
    for (const auto& iface : manifest.interfaces) {
        StubInterface si{iface.name, {}};
        for (const auto& m : iface.members) {
            StubEntry e{m.name, m.disp_id, m.kind, {}, m.return_type, {}};
            for (const auto& p : m.params) e.params.push_back({p.name, p.type});
            e.call_template = make_template(e);
            si.entries.push_back(std::move(e));
        }
        d.interfaces.push_back(std::move(si));
    }
    return d;
}

std::string render_cpp(const StubDescription& d) {
    std::ostringstream out;
    const std::string version = std::to_string(d.library_version.major) + "." + std::to_string(d.library_version.minor);
    out << "// Generated by sume-idlc from library " << d.library_name << " " << version << ". Do not edit.\n"
        << "#pragma once\n\n"
        << "#include <cstdint>\n#include <functional>\n#include <memory>\n#include <string>\n"
        << "#include <string_view>\n\n"
        << "#include \"sume/client/proxy.hpp\"\n\n"
        << "namespace sume::proxies::" << cpp_name(lower(d.library_name)) << " {\n\n"
        << "inline constexpr std::string_view kLibraryName = \"" << d.library_name << "\";\n"
        << "inline constexpr std::string_view kLibraryVersion = \"" << version << "\";\n"
        << "inline constexpr std::string_view kManifestHash = \"" << d.manifest_hash << "\";\n";

    for (const auto& e : d.enums) {
        out << "\nnamespace " << cpp_name(e.name) << " {\n";
        for (const auto& [name, value] : e.values) {
            out << "inline constexpr std::int32_t " << cpp_name(name) << " = " << value << ";\n";
        }
        out << "}  // namespace " << cpp_name(e.name) << "\n";
    }

    out << "\n";
    for (const auto& iface : d.interfaces) out << "class " << cpp_name(iface.name) << ";\n";

    for (const auto& iface : d.interfaces) {
        const std::string cls = cpp_name(iface.name);
        out << "\nclass " << cls << " : public ::sume::client::Proxy {\n"
            << "public:\n"
            << "    static constexpr std::string_view kInterfaceName = \"" << iface.name << "\";\n\n"
            << "    " << cls << "() = default;\n"
            << "    explicit " << cls << "(::sume::client::Proxy base) : Proxy(std::move(base)) {}\n";
        for (const auto& e : iface.entries) {
            out << "\n    // " << e.call_template << "\n";
            if (e.kind == MemberKind::Event) {
                out << "    ::sume::orb::Subscription subscribe_" << e.member << "(std::function<void(";
                for (std::size_t i = 0; i < e.params.size(); ++i) {
                    if (i) out << ", ";
                    out << cpp_value_type(d, e.params[i].type);
                }
                out << ")> handler) const;\n";
            } else {
                out << "    " << cpp_value_type(d, e.return_type) << " " << cpp_name(e.member) << cpp_signature(d, e)
                    << " const;\n";
            }
        }
        out << "};\n";
    }

    for (const auto& iface : d.interfaces) {
        const std::string cls = cpp_name(iface.name);
        for (const auto& e : iface.entries) {
            out << "\n";
            if (e.kind == MemberKind::Event) {
                out << "inline ::sume::orb::Subscription " << cls << "::subscribe_" << e.member
                    << "(std::function<void(";
                for (std::size_t i = 0; i < e.params.size(); ++i) {
                    if (i) out << ", ";
                    out << cpp_value_type(d, e.params[i].type);
                }
                out << ")> handler) const {\n"
                    << "    return ::sume::client::Proxy::subscribe(\"" << e.member
                    << "\", [handler = std::move(handler)](const std::vector<::sume::orb::WireValue>& args) {\n"
                    << "        ::sume::client::expect_arity(args, " << e.params.size() << ");\n"
                    << "        handler(";
                for (std::size_t i = 0; i < e.params.size(); ++i) {
                    if (i) out << ", ";
                    out << "::sume::client::from_wire<" << cpp_value_type(d, e.params[i].type) << ">(args[" << i
                        << "])";
                }
                out << ");\n    });\n}\n";
                continue;
            }
            const std::string ret = cpp_value_type(d, e.return_type);
            out << "inline " << ret << " " << cls << "::" << cpp_name(e.member) << cpp_signature(d, e) << " const {\n";
            const std::string call_args = std::to_string(e.disp_id) + ", " + cpp_args(d, e);
            if (e.return_type == "void") {
                out << "    ::sume::client::Proxy::call(" << call_args << ");\n";
            } else if (d.is_interface(e.return_type)) {
                out << "    return " << ret << "(::sume::client::Proxy::call_object(" << call_args << "));\n";
            } else {
                out << "    return ::sume::client::from_wire<" << ret << ">(::sume::client::Proxy::call(" << call_args
                    << "));\n";
            }
            out << "}\n";
        }
    }

    for (const auto& co : d.coclasses) {
        out << "\nstruct " << cpp_name(co.name) << " {\n"
            << "    static constexpr std::string_view kProgId = \"" << co.prog_id << "\";\n"
            << "    static " << cpp_name(co.default_interface)
            << " Create(const std::shared_ptr<::sume::orb::Session>& session) {\n"
            << "        return " << cpp_name(co.default_interface) << "(::sume::client::activate(session, kProgId));\n"
            << "    }\n};\n";
    }

    out << "\n}  // namespace sume::proxies::" << cpp_name(lower(d.library_name)) << "\n";
    return out.str();
}

std::string render_typescript(const StubDescription& d) {
    std::ostringstream out;
    const std::string version = std::to_string(d.library_version.major) + "." + std::to_string(d.library_version.minor);
    out << "// Generated by sume-idlc from library " << d.library_name << " " << version << ". Do not edit.\n\n"
        << "export const LIBRARY_NAME = \"" << d.library_name << "\";\n"
        << "export const LIBRARY_VERSION = \"" << version << "\";\n"
        << "export const MANIFEST_HASH = \"" << d.manifest_hash << "\";\n\n"
        << "export interface WireArg {\n  tag: string;\n  value: unknown;\n}\n\n"
        << "export interface Invoker {\n"
        << "  invoke(objectId: string, dispId: number, args: WireArg[]): Promise<unknown>;\n"
        << "  subscribe(objectId: string, event: string, handler: (args: unknown[]) => void): () => void;\n"
        << "  activate(progId: string): Promise<string>;\n"
        << "}\n";

    for (const auto& e : d.enums) {
        out << "\nexport const " << e.name << " = {\n";
        for (const auto& [name, value] : e.values) out << "  " << name << ": " << value << ",\n";
        out << "} as const;\n";
    }

    for (const auto& iface : d.interfaces) {
        out << "\nexport class " << iface.name << " {\n"
            << "  static readonly interfaceName = \"" << iface.name << "\";\n\n"
            << "  constructor(readonly invoker: Invoker, readonly objectId: string) {}\n";
        for (const auto& e : iface.entries) {
            out << "\n  // " << e.call_template << "\n";
            std::string params;
            std::string args;
            for (std::size_t i = 0; i < e.params.size(); ++i) {
                const auto& p = e.params[i];
                if (i) {
                    params += ", ";
                    args += ", ";
                }
                params += p.name + ": " + ts_type(d, p.type);
                std::string value = d.is_interface(p.type) ? p.name + ".objectId" : p.name;
                args += "{ tag: \"" + ts_tag(d, p.type) + "\", value: " + value + " }";
            }
            if (e.kind == MemberKind::Event) {
                out << "  on_" << e.member << "(handler: (" << params << ") => void): () => void {\n"
                    << "    return this.invoker.subscribe(this.objectId, \"" << e.member
                    << "\", (args) => handler(";
                for (std::size_t i = 0; i < e.params.size(); ++i) {
                    if (i) out << ", ";
                    out << "args[" << i << "] as " << ts_type(d, e.params[i].type);
                }
                out << "));\n  }\n";
                continue;
            }
            out << "  async " << e.member << "(" << params << "): Promise<" << ts_type(d, e.return_type) << "> {\n"
                << "    const result = await this.invoker.invoke(this.objectId, " << e.disp_id << ", [" << args
                << "]);\n";
            if (e.return_type == "void") {
                out << "    void result;\n";
            } else if (d.is_interface(e.return_type)) {
                out << "    return new " << e.return_type << "(this.invoker, result as string);\n";
            } else {
                out << "    return result as " << ts_type(d, e.return_type) << ";\n";
            }
            out << "  }\n";
        }
        out << "}\n";
    }

    for (const auto& co : d.coclasses) {
        out << "\nexport async function create" << co.name << "(invoker: Invoker): Promise<" << co.default_interface
            << "> {\n"
            << "  return new " << co.default_interface << "(invoker, await invoker.activate(\"" << co.prog_id
            << "\"));\n}\n";
    }
    return out.str();
}

}  // namespace sume::proxygen
