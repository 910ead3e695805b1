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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "sume/proxygen/proxygen.hpp"
#include "support/random_library.hpp"
#include "support/test_paths.hpp"

namespace sume::proxygen {
namespace {

using typelib::TypeLibrary;

TypeLibrary parse_ok(std::string_view src) {
    auto r = typelib::parse_idl(src);
    if (!r.ok()) {
        for (const auto& d : r.diagnostics) ADD_FAILURE() << d.to_string();
        return {};
    }
    return *r.library;
}

TypeLibrary presenter() { return parse_ok(test::read_file(test::presenter_sidl_path())); }

RegistrationMetadata metadata_of(const TypeLibrary& lib) {
    return RegistrationMetadata{lib.name, lib.version, lib.enums, lib.interfaces, lib.coclasses};
}

const ManifestMember* find_member(const ProxyManifest& m, std::string_view iface, std::string_view name) {
    const auto* i = m.find_interface(iface);
    if (!i) return nullptr;
    for (const auto& mem : i->members) {
        if (mem.name == name) return &mem;
    }
    return nullptr;
}

TEST(Manifest, SetWindowStateRecord) {
    auto m = generate_manifest(presenter());
    const auto* rec = find_member(m, "Application", "set_WindowState");
    ASSERT_NE(rec, nullptr);
    EXPECT_EQ(rec->disp_id, 2u);
    EXPECT_EQ(rec->kind, MemberKind::Set);
    ASSERT_EQ(rec->params.size(), 1u);
    EXPECT_EQ(rec->params[0].type, "i4");
    EXPECT_EQ(rec->return_type, "void");
}

TEST(Manifest, EmptyLibraryHasStableHash) {
    auto lib = parse_ok("library Empty version 1.0;");
    auto a = generate_manifest(lib);
    auto b = generate_manifest(lib);
    EXPECT_TRUE(a.interfaces.empty());
    EXPECT_TRUE(a.coclasses.empty());
    EXPECT_EQ(a.hash, b.hash);
    EXPECT_EQ(a.hash.rfind("sha256:", 0), 0u);
    EXPECT_EQ(a.hash.size(), 7u + 64u);
    EXPECT_EQ(to_json(a), to_json(b));
}

TEST(Manifest, HashChangesWithContent) {
    auto a = generate_manifest(parse_ok("library A version 1.0;"));
    auto b = generate_manifest(parse_ok("library A version 1.1;"));
    EXPECT_NE(a.hash, b.hash);
}

TEST(Manifest, JsonKeysAreSorted) {
    std::string json = to_json(generate_manifest(presenter()));
    // Top-level keys appear alphabetically.
    auto pos = [&](std::string_view key) { return json.find("\n  \"" + std::string(key) + "\":"); };
    EXPECT_NE(pos("version"), std::string::npos);
    EXPECT_LT(pos("coclasses"), pos("enums"));
    EXPECT_LT(pos("enums"), pos("hash"));
    EXPECT_LT(pos("hash"), pos("interfaces"));
    EXPECT_LT(pos("interfaces"), pos("library"));
    EXPECT_LT(pos("library"), pos("version"));
    EXPECT_EQ(json.back(), '\n');
}

TEST(Manifest, JsonRoundTrip) {
    auto m = generate_manifest(presenter());
    auto back = manifest_from_json(to_json(m));
    EXPECT_EQ(to_json(back), to_json(m));
    EXPECT_EQ(back.hash, m.hash);
}

TEST(Manifest, TamperedJsonRejected) {
    std::string json = to_json(generate_manifest(presenter()));
    auto at = json.find("\"set_WindowState\"");
    ASSERT_NE(at, std::string::npos);
    json.replace(at, 17, "\"set_WindowStatf\"");
    EXPECT_THROW(manifest_from_json(json), std::invalid_argument);
    EXPECT_THROW(manifest_from_json("{"), std::invalid_argument);
    EXPECT_THROW(manifest_from_json("[]"), std::invalid_argument);
}

TEST(Manifest, HashInvariantUnderReparse) {
    testing::RandomLibraryGenerator gen(7);
    for (int i = 0; i < 200; ++i) {
        auto lib = gen.next();
        auto again = parse_ok(typelib::emit_idl(lib));
        ASSERT_EQ(generate_manifest(lib).hash, generate_manifest(again).hash) << typelib::emit_idl(lib);
    }
}

// Oracle: walks the typelib model directly and checks every member appears
// exactly once with the dispatch id typelib assigned.
TEST(Manifest, CompleteAndAgreesWithDispatch) {
    testing::RandomLibraryGenerator gen(11);
    for (int round = 0; round < 300; ++round) {
        auto lib = gen.next();
        auto m = generate_manifest(lib);
        ASSERT_EQ(m.interfaces.size(), lib.interfaces.size());
        for (const auto& iface : lib.interfaces) {
            const auto* mi = m.find_interface(iface.name);
            ASSERT_NE(mi, nullptr);
            std::size_t expected = 0;
            for (const auto& member : iface.members) {
                if (const auto* p = std::get_if<typelib::PropertyDef>(&member)) {
                    expected += p->readonly ? 1 : 2;
                } else {
                    expected += 1;
                }
            }
            ASSERT_EQ(mi->members.size(), expected);
            std::set<std::string> names;
            for (const auto& mm : mi->members) {
                EXPECT_TRUE(names.insert(mm.name).second) << mm.name;
                const auto* entry = iface.find_dispatch(mm.name);
                ASSERT_NE(entry, nullptr) << mm.name;
                EXPECT_EQ(entry->disp_id, mm.disp_id);
                auto sig = iface.signature_of(*entry);
                ASSERT_EQ(sig.params.size(), mm.params.size());
                for (std::size_t k = 0; k < sig.params.size(); ++k) {
                    EXPECT_EQ(sig.params[k].type.spelling(), mm.params[k].type);
                }
                EXPECT_EQ(sig.return_type.spelling(), mm.return_type);
            }
        }
    }
}

TEST(ReverseGenerate, EchoRegistry) {
    RegistrationMetadata reg;
    reg.library_name = "EchoLib";
    typelib::InterfaceDef echo{"Echo", {}, {}};
    echo.members.emplace_back(typelib::MethodDef{
        "Ping", typelib::TypeRef::primitive(typelib::TypeRef::Kind::String),
        {typelib::Param{"s", typelib::TypeRef::primitive(typelib::TypeRef::Kind::String)}}});
    reg.interfaces.push_back(echo);
    reg.coclasses.push_back(typelib::CoclassDef{"EchoServer", "Echo.Server", {"Echo"}});

    auto lib = reverse_generate(reg);
    ASSERT_EQ(lib.interfaces.size(), 1u);
    ASSERT_EQ(lib.interfaces[0].members.size(), 1u);
    ASSERT_EQ(lib.interfaces[0].dispatch.size(), 1u);
    EXPECT_EQ(lib.interfaces[0].dispatch[0].disp_id, 1u);
    EXPECT_EQ(lib.interfaces[0].dispatch[0].name, "Ping");
    EXPECT_TRUE(typelib::parse_idl(typelib::emit_idl(lib)).ok());
}

TEST(ReverseGenerate, EmptyRegistryRejected) {
    RegistrationMetadata reg;
    reg.library_name = "Nothing";
    EXPECT_THROW(reverse_generate(reg), ReverseGenerationError);
}

TEST(ReverseGenerate, UnresolvableReferenceRejected) {
    RegistrationMetadata reg;
    reg.library_name = "Broken";
    typelib::InterfaceDef a{"A", {}, {}};
    a.members.emplace_back(typelib::MethodDef{"Get", typelib::TypeRef::interface("Missing"), {}});
    reg.interfaces.push_back(a);
    reg.coclasses.push_back(typelib::CoclassDef{"ACo", "Broken.A", {"A"}});
    EXPECT_THROW(reverse_generate(reg), ReverseGenerationError);
}

TEST(ReverseGenerate, PresenterFixedPoint) {
    auto authored = presenter();
    auto recovered = reverse_generate(metadata_of(authored));
    EXPECT_EQ(recovered, authored);
    auto reparsed = parse_ok(typelib::emit_idl(recovered));
    EXPECT_EQ(reparsed, authored);
    EXPECT_EQ(generate_manifest(recovered), generate_manifest(authored));
}

TEST(ReverseGenerate, RandomLibrariesAgreeWithManifest) {
    testing::RandomLibraryGenerator gen(23);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        auto lib = gen.next();
        if (lib.coclasses.empty()) continue;
        ++checked;
        auto back = reverse_generate(metadata_of(lib));
        ASSERT_EQ(generate_manifest(back), generate_manifest(lib));
    }
    EXPECT_GT(checked, 50);
}

TEST(StubHooks, TemplateForSetter) {
    auto stubs = emit_stub_hooks(generate_manifest(presenter()));
    bool found = false;
    for (const auto& iface : stubs.interfaces) {
        for (const auto& e : iface.entries) {
            if (iface.name == "Application" && e.member == "set_WindowState") {
                EXPECT_EQ(e.call_template, "set_WindowState(value: i4) -> void dispatches (dispId=2)");
                found = true;
            }
        }
    }
    EXPECT_TRUE(found);
}

TEST(StubHooks, EventTemplate) {
    auto stubs = emit_stub_hooks(generate_manifest(presenter()));
    std::string tmpl;
    for (const auto& iface : stubs.interfaces) {
        if (iface.name != "SlideShowView") continue;
        for (const auto& e : iface.entries) {
            if (e.member == "SlideChanged") tmpl = e.call_template;
        }
    }
    EXPECT_EQ(tmpl.rfind("SlideChanged(newIndex: i4) -> void raises (dispId=", 0), 0u) << tmpl;
}

TEST(StubHooks, EmptyManifestHasNoTemplates) {
    auto stubs = emit_stub_hooks(generate_manifest(parse_ok("library Empty version 1.0;")));
    EXPECT_TRUE(stubs.interfaces.empty());
    EXPECT_TRUE(stubs.coclasses.empty());
}

TEST(StubHooks, EveryMemberInExactlyOneTemplate) {
    testing::RandomLibraryGenerator gen(31);
    for (int round = 0; round < 200; ++round) {
        auto m = generate_manifest(gen.next());
        auto stubs = emit_stub_hooks(m);
        std::map<std::pair<std::string, std::uint32_t>, int> seen;
        for (const auto& iface : stubs.interfaces) {
            for (const auto& e : iface.entries) seen[{iface.name, e.disp_id}]++;
        }
        std::size_t total = 0;
        for (const auto& iface : m.interfaces) {
            for (const auto& mem : iface.members) {
                ++total;
                EXPECT_EQ((seen[{iface.name, mem.disp_id}]), 1);
            }
        }
        EXPECT_EQ(seen.size(), total);
    }
}

TEST(Renderers, CppContainsProxyMembers) {
    auto cpp = render_cpp(emit_stub_hooks(generate_manifest(presenter())));
    EXPECT_NE(cpp.find("namespace sume::proxies::presenter"), std::string::npos);
    EXPECT_NE(cpp.find("class Application : public ::sume::client::Proxy"), std::string::npos);
    EXPECT_NE(cpp.find("void set_WindowState(std::int32_t value) const;"), std::string::npos);
    EXPECT_NE(cpp.find("Presentations get_Presentations() const;"), std::string::npos);
    EXPECT_NE(cpp.find("inline constexpr std::int32_t ppLayoutTitle = 1;"), std::string::npos);
    EXPECT_NE(cpp.find("static constexpr std::string_view kProgId = \"Presenter.Application\";"),
              std::string::npos);
    EXPECT_NE(cpp.find("subscribe_SlideChanged"), std::string::npos);
}

TEST(Renderers, CppEscapesKeywords) {
    auto lib = parse_ok(R"(library K version 1.0;
interface I { method void delete(i4 new); }
coclass C progid "K.C" { implements I; }
)");
    auto cpp = render_cpp(emit_stub_hooks(generate_manifest(lib)));
    EXPECT_NE(cpp.find("void delete_(std::int32_t new_) const;"), std::string::npos) << cpp;
}

TEST(Renderers, TypeScriptShape) {
    auto ts = render_typescript(emit_stub_hooks(generate_manifest(presenter())));
    EXPECT_NE(ts.find("export class Application {"), std::string::npos);
    EXPECT_NE(ts.find("async set_WindowState(value: number): Promise<void>"), std::string::npos);
    EXPECT_NE(ts.find("invoke(this.objectId, 2, [{ tag: \"i4\", value: value }])"), std::string::npos);
    EXPECT_NE(ts.find("on_SlideChanged(handler: (newIndex: number) => void)"), std::string::npos);
    EXPECT_NE(ts.find("export async function createPresenterApplication(invoker: Invoker): Promise<Application>"),
              std::string::npos);
    EXPECT_NE(ts.find("export const PpSlideLayout = {"), std::string::npos);
}

// Type-checks the rendered TypeScript when a compiler is available.
TEST(Renderers, TypeScriptCompiles) {
    if (std::system("command -v tsc >/dev/null 2>&1") != 0) GTEST_SKIP() << "tsc not installed";
    auto dir = std::filesystem::temp_directory_path() / ("sume_ts_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    auto file = dir / "presenter.ts";
    std::ofstream(file) << render_typescript(emit_stub_hooks(generate_manifest(presenter())));
    std::string cmd = "tsc --strict --noEmit --target es2020 " + file.string() + " > " + (dir / "tsc.log").string() +
                      " 2>&1";
    int rc = std::system(cmd.c_str());
    std::string log = test::read_file((dir / "tsc.log").string());
    std::filesystem::remove_all(dir);
    EXPECT_EQ(rc, 0) << log;
}

}  // namespace
}  // namespace sume::proxygen
