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

#include <fstream>
#include <random>
#include <sstream>

#include "sume/typelib/typelib.hpp"
#include "support/random_library.hpp"
#include "support/test_paths.hpp"

namespace sume::typelib {
namespace {

TypeLibrary parse_ok(std::string_view src) {
    auto result = parse_idl(src);
    if (!result.ok()) {
        std::string all;
        for (const auto& d : result.diagnostics) all += d.to_string() + "\n";
        ADD_FAILURE() << "unexpected diagnostics:\n" << all;
        return {};
    }
    return *result.library;
}

bool has_diag(const ParseResult& r, std::string_view needle) {
    for (const auto& d : r.diagnostics) {
        if (d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

constexpr std::string_view kWindowStateIdl = R"(
library Test version 1.0;
interface Application {
    property i4 WindowState;
    property i4 Visible;
}
)";

TEST(TypelibParse, EmptyLibrary) {
    auto lib = parse_ok("library Empty version 1.0;");
    EXPECT_EQ(lib.name, "Empty");
    EXPECT_EQ(lib.version, (Version{1, 0}));
    EXPECT_TRUE(lib.enums.empty());
    EXPECT_TRUE(lib.interfaces.empty());
    EXPECT_TRUE(lib.coclasses.empty());
}

TEST(TypelibParse, ReadWritePropertiesTakeTwoIds) {
    auto lib = parse_ok(kWindowStateIdl);
    const auto& dispatch = lib.interfaces.at(0).dispatch;
    ASSERT_EQ(dispatch.size(), 4u);
    EXPECT_EQ(dispatch[0].disp_id, 1u);
    EXPECT_EQ(dispatch[0].name, "get_WindowState");
    EXPECT_EQ(dispatch[1].disp_id, 2u);
    EXPECT_EQ(dispatch[1].name, "set_WindowState");
    EXPECT_EQ(dispatch[2].disp_id, 3u);
    EXPECT_EQ(dispatch[2].name, "get_Visible");
    EXPECT_EQ(dispatch[3].disp_id, 4u);
    EXPECT_EQ(dispatch[3].name, "set_Visible");
    EXPECT_EQ(dispatch[1].role, MemberRole::Setter);
}

TEST(TypelibParse, ReadonlyPropertyTakesOneId) {
    auto lib = parse_ok(R"(library T version 1.0;
        interface A { property i4 Count readonly; method void Go(); event Done(i4 code); })");
    const auto& d = lib.interfaces[0].dispatch;
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0].name, "get_Count");
    EXPECT_EQ(d[1].name, "Go");
    EXPECT_EQ(d[1].disp_id, 2u);
    EXPECT_EQ(d[2].role, MemberRole::Event);
    EXPECT_EQ(d[2].disp_id, 3u);
}

TEST(TypelibParse, NamedTypesResolveToEnumOrInterface) {
    auto lib = parse_ok(R"(library T version 2.3;
        enum Color { Red = 1, Green = -2 Blue = 3 }
        interface B { }
        interface A { method B Make(Color c); property Color Tint; }
        coclass AClass progid "T.A" { implements A; implements B; })");
    const auto& a = lib.interfaces[1];
    const auto& make = std::get<MethodDef>(a.members[0]);
    EXPECT_EQ(make.return_type.kind, TypeRef::Kind::Interface);
    EXPECT_EQ(make.params[0].type.kind, TypeRef::Kind::Enum);
    EXPECT_EQ(lib.enums[0].values[1].value, -2);
    EXPECT_EQ(lib.coclasses[0].default_interface(), "A");
}

TEST(TypelibParse, CommentsAreIgnored) {
    auto lib = parse_ok("// header\nlibrary C version 0.1; // trailing\n// interface X {}\n");
    EXPECT_EQ(lib.version, (Version{0, 1}));
}

TEST(TypelibParse, SyntaxErrorCarriesPosition) {
    auto r = parse_idl("library T version 1.0;\ninterface A {\n    property i4;\n}\n");
    ASSERT_FALSE(r.ok());
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].line, 3);
    EXPECT_EQ(r.diagnostics[0].column, 16);
    EXPECT_TRUE(has_diag(r, "expected property name"));
}

TEST(TypelibParse, RecoversAndReportsSeveralErrors) {
    auto r = parse_idl(R"(library T version 1.0;
interface A {
    property i4 ;
    method void Ok();
    method void (;
}
interface B { method Nope Go(); }
)");
    ASSERT_FALSE(r.ok());
    EXPECT_GE(r.diagnostics.size(), 3u);
    EXPECT_TRUE(has_diag(r, "unresolved type reference 'Nope'"));
}

TEST(TypelibParse, DuplicateTopLevelName) {
    auto r = parse_idl("library T version 1.0; enum X { } interface X { }");
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(has_diag(r, "duplicate name 'X'"));
    EXPECT_EQ(r.diagnostics[0].line, 1);
}

TEST(TypelibParse, EnumValueCollision) {
    auto r = parse_idl("library T version 1.0; enum E { A = 1, B = 1 }");
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(has_diag(r, "enum value collision"));
}

TEST(TypelibParse, PropertyForbidsAccessorNamedSiblings) {
    auto r = parse_idl("library T version 1.0; interface A { property i4 X; method void set_X(i4 v); }");
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(has_diag(r, "conflicts with member 'set_X'"));
}

TEST(TypelibParse, MemberRules) {
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A { method void M(); method i4 M(); }"),
                         "duplicate member 'M'"));
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A { method void M(i4 a, r8 a); }"),
                         "duplicate parameter 'a'"));
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A { property void P; }"), "cannot be void"));
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A { method void M(void x); }"),
                         "cannot be void"));
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A { event Fired(A who); }"),
                         "interface-typed parameter"));
}

TEST(TypelibParse, CoclassRules) {
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; coclass C progid \"T.C\" { implements Missing; }"),
                         "unknown interface 'Missing'"));
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A {} coclass C progid \"T..C\" { implements A; }"),
                         "invalid progid"));
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface A {}"
                                   "coclass C progid \"T.C\" { implements A; }"
                                   "coclass D progid \"T.C\" { implements A; }"),
                         "duplicate progid"));
    EXPECT_FALSE(parse_idl("library T version 1.0; interface A {} coclass C progid \"T.C\" { }").ok());
}

TEST(TypelibParse, PrimitiveNamesAreReserved) {
    EXPECT_TRUE(has_diag(parse_idl("library T version 1.0; interface i4 { }"), "reserved type name"));
}

TEST(TypelibParse, MissingHeader) {
    EXPECT_FALSE(parse_idl("").ok());
    EXPECT_FALSE(parse_idl("interface A {}").ok());
}

TEST(TypelibEmit, EmptyLibraryIsOneLine) {
    auto lib = parse_ok("library Empty version 1.0;");
    EXPECT_EQ(emit_idl(lib), "library Empty version 1.0;\n");
}

TEST(TypelibEmit, PresenterPreservesDeclarationOrder) {
    auto lib = parse_ok(test::read_file(test::presenter_sidl_path()));
    std::string text = emit_idl(lib);
    auto ws = text.find("property i4 WindowState");
    auto vis = text.find("property i4 Visible");
    ASSERT_NE(ws, std::string::npos);
    ASSERT_NE(vis, std::string::npos);
    EXPECT_LT(ws, vis);
    EXPECT_EQ(parse_ok(text), lib);
}

TEST(TypelibEmit, SecondEmissionIsByteIdentical) {
    auto lib = parse_ok(test::read_file(test::presenter_sidl_path()));
    std::string first = emit_idl(lib);
    std::string second = emit_idl(parse_ok(first));
    EXPECT_EQ(first, second);
}

TEST(TypelibResolve, Examples) {
    auto lib = parse_ok(test::read_file(test::presenter_sidl_path()));
    auto d = resolve_member(lib, "Application", 2);
    EXPECT_EQ(d.entry.role, MemberRole::Setter);
    EXPECT_EQ(member_name(*d.member), "WindowState");

    try {
        resolve_member(lib, "Application", 0);
        FAIL() << "expected unknown dispid";
    } catch (const ResolveError& e) {
        EXPECT_EQ(e.reason(), ResolveError::Reason::UnknownDispId);
    }
    try {
        resolve_member(lib, "Nope", 1);
        FAIL() << "expected unknown interface";
    } catch (const ResolveError& e) {
        EXPECT_EQ(e.reason(), ResolveError::Reason::UnknownInterface);
    }
}

TEST(TypelibResolve, PresenterApplicationTable) {
    auto lib = parse_ok(test::read_file(test::presenter_sidl_path()));
    const auto* app = lib.find_interface("Application");
    ASSERT_NE(app, nullptr);
    EXPECT_EQ(app->find_dispatch("set_Visible")->disp_id, 4u);
    EXPECT_EQ(app->find_dispatch("get_Presentations")->disp_id, 5u);
    EXPECT_EQ(app->find_dispatch("Quit")->disp_id, 6u);
}

TEST(TypelibProperty, RoundTripOverRandomLibraries) {
    testing::RandomLibraryGenerator gen(0x5eed);
    for (int i = 0; i < 300; ++i) {
        TypeLibrary lib = gen.next();
        std::string text = emit_idl(lib);
        auto reparsed = parse_idl(text);
        ASSERT_TRUE(reparsed.ok()) << text << "\n" << reparsed.diagnostics[0].to_string();
        ASSERT_EQ(*reparsed.library, lib) << text;
        ASSERT_EQ(emit_idl(*reparsed.library), text);
    }
}

TEST(TypelibProperty, DispatchIsDense) {
    testing::RandomLibraryGenerator gen(42);
    for (int i = 0; i < 300; ++i) {
        TypeLibrary lib = gen.next();
        for (const auto& iface : lib.interfaces) {
            for (std::size_t k = 0; k < iface.dispatch.size(); ++k) {
                const auto& e = iface.dispatch[k];
                ASSERT_EQ(e.disp_id, k + 1);
                if (e.role == MemberRole::Setter) {
                    ASSERT_GT(k, 0u);
                    const auto& getter = iface.dispatch[k - 1];
                    EXPECT_EQ(getter.role, MemberRole::Getter);
                    EXPECT_EQ(getter.member_index, e.member_index);
                }
            }
        }
    }
}

// Arbitrary bytes and mutated valid sources: the parser must always return
// exactly one of a model or diagnostics.
TEST(TypelibProperty, ParserIsTotalOnGarbage) {
    std::mt19937_64 rng(7);
    const std::string seed = test::read_file(test::presenter_sidl_path());
    for (int i = 0; i < 2000; ++i) {
        std::string input;
        if (i % 2 == 0) {
            std::size_t n = rng() % 512;
            for (std::size_t k = 0; k < n; ++k) input.push_back(static_cast<char>(rng() & 0xff));
        } else {
            input = seed;
            int edits = 1 + static_cast<int>(rng() % 8);
            for (int e = 0; e < edits; ++e) {
                std::size_t at = rng() % input.size();
                switch (rng() % 3) {
                    case 0: input[at] = static_cast<char>(rng() & 0xff); break;
                    case 1: input.erase(at, 1 + rng() % 16); break;
                    default: input.insert(at, 1, "{}();,=.-\"a1 "[rng() % 13]); break;
                }
                if (input.empty()) input = "x";
            }
        }
        auto r = parse_idl(input);
        ASSERT_NE(r.library.has_value(), !r.diagnostics.empty());
    }
}

TEST(TypelibBuild, RejectsInvalidDraft) {
    TypeLibrary draft;
    draft.name = "D";
    draft.interfaces.push_back({"A", {MethodDef{"M", TypeRef::interface("Missing"), {}}}, {}});
    auto r = build_library(draft);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.diagnostics[0].line, 0);
}

}  // namespace
}  // namespace sume::typelib
