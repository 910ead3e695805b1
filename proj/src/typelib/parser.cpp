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

#include <charconv>
#include <limits>

#include "sume/typelib/typelib.hpp"
#include "validate.hpp"

namespace sume::typelib {

using detail::Pos;

namespace {

constexpr std::size_t kMaxDiagnostics = 64;

bool ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    Pos pos;
};

class Lexer {
public:
    Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_trivia();
            Pos at{line_, col_};
            if (i_ >= src_.size()) {
                out.push_back({Tok::End, {}, at});
                return out;
            }
            char c = src_[i_];
            if (ascii_letter(c)) {
                std::size_t start = i_;
                while (i_ < src_.size() && (ascii_letter(src_[i_]) || ascii_digit(src_[i_]) || src_[i_] == '_')) {
                    advance();
                }
                out.push_back({Tok::Ident, src_.substr(start, i_ - start), at});
            } else if (ascii_digit(c)) {
                std::size_t start = i_;
                while (i_ < src_.size() && ascii_digit(src_[i_])) advance();
                out.push_back({Tok::Int, src_.substr(start, i_ - start), at});
            } else if (c == '"') {
                advance();
                std::size_t start = i_;
                while (i_ < src_.size() && src_[i_] != '"' && src_[i_] != '\n') advance();
                if (i_ >= src_.size() || src_[i_] != '"') {
                    report(at, "unterminated string literal");
                    continue;
                }
                out.push_back({Tok::String, src_.substr(start, i_ - start), at});
                advance();
            } else if (std::string_view("{}();,=.-").find(c) != std::string_view::npos) {
                out.push_back({Tok::Punct, src_.substr(i_, 1), at});
                advance();
            } else {
                unsigned byte = static_cast<unsigned char>(c);
                std::string shown = byte >= 0x20 && byte < 0x7f ? std::string("'") + c + "'" : "byte 0x" + hex(byte);
                report(at, "unexpected character " + shown);
                advance();
            }
        }
    }

private:
    static std::string hex(unsigned byte) {
        const char* digits = "0123456789abcdef";
        return {digits[byte >> 4], digits[byte & 0xf]};
    }

    void report(Pos at, std::string msg) {
        if (diags_.size() < kMaxDiagnostics) diags_.push_back({at.line, at.column, std::move(msg)});
    }

    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_trivia() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    std::string_view src_;
    std::vector<Diagnostic>& diags_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct SyntaxError {};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

    void run(TypeLibrary& lib, detail::SourceMap& map) {
        try {
            header(lib, map);
        } catch (const SyntaxError&) {
            sync_top_level();
        }
        while (peek().kind != Tok::End && diags_.size() < kMaxDiagnostics) {
            try {
                if (at_keyword("enum")) {
                    enumeration(lib, map);
                } else if (at_keyword("interface")) {
                    interface(lib, map);
                } else if (at_keyword("coclass")) {
                    coclass(lib, map);
                } else {
                    fail("expected 'enum', 'interface' or 'coclass'");
                }
            } catch (const SyntaxError&) {
                sync_top_level();
            }
        }
    }

private:
    const Token& peek() const { return toks_[idx_]; }
    const Token& take() {
        const Token& t = toks_[idx_];
        if (t.kind != Tok::End) ++idx_;
        return t;
    }

    bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
    bool at_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }

    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + std::string(t.text) + "'";
        if (diags_.size() < kMaxDiagnostics) diags_.push_back({t.pos.line, t.pos.column, msg + ", found " + found});
        throw SyntaxError{};
    }

    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "'");
        take();
    }
    void expect_punct(char c) {
        if (!at_punct(c)) fail(std::string("expected '") + c + "'");
        take();
    }
    const Token& expect_ident(const char* what) {
        if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
        return take();
    }

    int expect_int(bool allow_negative, const char* what) {
        bool negative = false;
        if (allow_negative && at_punct('-')) {
            take();
            negative = true;
        }
        if (peek().kind != Tok::Int) fail(std::string("expected ") + what);
        const Token& t = peek();
        long long value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (negative) value = -value;
        if (ec != std::errc{} || value < std::numeric_limits<std::int32_t>::min() ||
            value > std::numeric_limits<std::int32_t>::max()) {
            fail(std::string(what) + " out of 32-bit range");
        }
        take();
        return static_cast<int>(value);
    }

    // Skips to the next token that can start a declaration.
    void sync_top_level() {
        while (peek().kind != Tok::End) {
            if (at_keyword("enum") || at_keyword("interface") || at_keyword("coclass")) {
                if (idx_ == 0) return;
                const Token& prev = toks_[idx_ - 1];
                if (prev.kind == Tok::Punct && (prev.text == "}" || prev.text == ";")) return;
            }
            take();
        }
    }

    // Inside a brace block: skip past the next ';' or stop before '}'.
    void sync_member() {
        while (peek().kind != Tok::End) {
            if (at_punct('}')) return;
            if (at_punct(';')) {
                take();
                return;
            }
            take();
        }
    }

    void header(TypeLibrary& lib, detail::SourceMap& map) {
        expect_keyword("library");
        const Token& name = expect_ident("library name");
        lib.name = std::string(name.text);
        map.library = name.pos;
        expect_keyword("version");
        lib.version.major = expect_int(false, "major version");
        expect_punct('.');
        lib.version.minor = expect_int(false, "minor version");
        expect_punct(';');
    }

    void enumeration(TypeLibrary& lib, detail::SourceMap& map) {
        take();
        const Token& name = expect_ident("enum name");
        EnumDef def{std::string(name.text), {}};
        detail::EnumPos pos{name.pos, {}};
        expect_punct('{');
        while (!at_punct('}')) {
            const Token& value_name = expect_ident("enumerator name or '}'");
            expect_punct('=');
            int value = expect_int(true, "enumerator value");
            def.values.push_back({std::string(value_name.text), value});
            pos.values.push_back(value_name.pos);
            if (at_punct(',')) take();
        }
        take();
        lib.enums.push_back(std::move(def));
        map.enums.push_back(std::move(pos));
    }

    TypeRef type_ref() {
        const Token& t = expect_ident("type");
        if (auto prim = primitive_from_keyword(t.text)) return TypeRef::primitive(*prim);
        // Provisional kind; validation decides between enum and interface.
        return TypeRef::interface(std::string(t.text));
    }

    std::vector<Param> params(detail::MemberPos& pos) {
        std::vector<Param> out;
        expect_punct('(');
        if (!at_punct(')')) {
            while (true) {
                Pos at = peek().pos;
                TypeRef type = type_ref();
                const Token& name = expect_ident("parameter name");
                out.push_back({std::string(name.text), std::move(type)});
                pos.params.push_back(at);
                if (!at_punct(',')) break;
                take();
            }
        }
        expect_punct(')');
        return out;
    }

    void member(InterfaceDef& iface, detail::InterfacePos& ipos) {
        detail::MemberPos pos;
        if (at_keyword("property")) {
            take();
            pos.type = peek().pos;
            TypeRef type = type_ref();
            const Token& name = expect_ident("property name");
            pos.name = name.pos;
            bool readonly = false;
            if (at_keyword("readonly")) {
                take();
                readonly = true;
            }
            expect_punct(';');
            iface.members.emplace_back(PropertyDef{std::string(name.text), std::move(type), readonly});
        } else if (at_keyword("method")) {
            take();
            pos.type = peek().pos;
            TypeRef ret = type_ref();
            const Token& name = expect_ident("method name");
            pos.name = name.pos;
            auto ps = params(pos);
            expect_punct(';');
            iface.members.emplace_back(MethodDef{std::string(name.text), std::move(ret), std::move(ps)});
        } else if (at_keyword("event")) {
            take();
            const Token& name = expect_ident("event name");
            pos.name = pos.type = name.pos;
            auto ps = params(pos);
            expect_punct(';');
            iface.members.emplace_back(EventDef{std::string(name.text), std::move(ps)});
        } else {
            fail("expected 'property', 'method', 'event' or '}'");
        }
        ipos.members.push_back(std::move(pos));
    }

    void interface(TypeLibrary& lib, detail::SourceMap& map) {
        take();
        const Token& name = expect_ident("interface name");
        InterfaceDef iface{std::string(name.text), {}, {}};
        detail::InterfacePos pos{name.pos, {}};
        expect_punct('{');
        while (!at_punct('}') && peek().kind != Tok::End) {
            try {
                member(iface, pos);
            } catch (const SyntaxError&) {
                if (diags_.size() >= kMaxDiagnostics) throw;
                sync_member();
            }
        }
        expect_punct('}');
        lib.interfaces.push_back(std::move(iface));
        map.interfaces.push_back(std::move(pos));
    }

    void coclass(TypeLibrary& lib, detail::SourceMap& map) {
        take();
        const Token& name = expect_ident("coclass name");
        CoclassDef def{std::string(name.text), {}, {}};
        detail::CoclassPos pos{name.pos, {}, {}};
        expect_keyword("progid");
        if (peek().kind != Tok::String) fail("expected progid string");
        pos.prog_id = peek().pos;
        def.prog_id = std::string(take().text);
        expect_punct('{');
        do {
            expect_keyword("implements");
            const Token& iface = expect_ident("interface name");
            def.interfaces.emplace_back(iface.text);
            pos.interfaces.push_back(iface.pos);
            expect_punct(';');
        } while (!at_punct('}'));
        take();
        lib.coclasses.push_back(std::move(def));
        map.coclasses.push_back(std::move(pos));
    }

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
    std::vector<Diagnostic>& diags_;
};

}  // namespace

std::string Diagnostic::to_string() const {
    if (line == 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

bool is_identifier(std::string_view text) {
    if (text.empty() || !ascii_letter(text.front())) return false;
    for (char c : text) {
        if (!ascii_letter(c) && !ascii_digit(c) && c != '_') return false;
    }
    return true;
}

bool is_prog_id(std::string_view text) {
    if (text.empty()) return false;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = text.find('.', start);
        if (!is_identifier(text.substr(start, dot == std::string_view::npos ? dot : dot - start))) return false;
        if (dot == std::string_view::npos) return true;
        start = dot + 1;
    }
}

ParseResult parse_idl(std::string_view source) {
    std::vector<Diagnostic> diags;
    std::vector<Token> tokens = Lexer(source, diags).run();
    TypeLibrary lib;
    detail::SourceMap map;
    bool header_ok = false;
    {
        Parser parser(std::move(tokens), diags);
        std::size_t before = diags.size();
        parser.run(lib, map);
        header_ok = !lib.name.empty() || diags.size() == before;
    }
    // Semantic checks only make sense on a model the parser fully built;
    // they still run after syntax errors so duplicate names etc. surface too.
    if (header_ok) detail::validate(lib, &map, diags);
    if (lib.name.empty() && diags.empty()) diags.push_back({1, 1, "missing library header"});

    ParseResult result;
    if (diags.empty()) {
        result.library = std::move(lib);
    } else {
        result.diagnostics = std::move(diags);
    }
    return result;
}

ParseResult build_library(TypeLibrary draft) {
    ParseResult result;
    detail::validate(draft, nullptr, result.diagnostics);
    if (result.diagnostics.empty()) result.library = std::move(draft);
    return result;
}

MemberDescriptor resolve_member(const TypeLibrary& lib, std::string_view interface_name, std::uint32_t disp_id) {
    const InterfaceDef* iface = lib.find_interface(interface_name);
    if (!iface) {
        throw ResolveError(ResolveError::Reason::UnknownInterface,
                           "unknown interface '" + std::string(interface_name) + "'");
    }
    const DispatchEntry* entry = iface->find_dispatch(disp_id);
    if (!entry) {
        throw ResolveError(ResolveError::Reason::UnknownDispId,
                           "unknown dispatch id " + std::to_string(disp_id) + " on " + iface->name);
    }
    return {iface, *entry, &iface->members[entry->member_index]};
}

}  // namespace sume::typelib
