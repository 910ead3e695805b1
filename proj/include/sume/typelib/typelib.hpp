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
#include <vector>

#include "sume/typelib/model.hpp"

namespace sume::typelib {

struct Diagnostic {
    int line = 0;    // 1-based; 0 when the item has no source position
    int column = 0;  // 1-based byte column
    std::string message;

    std::string to_string() const;
};

/// Exactly one of `library` / `diagnostics` is populated.
struct ParseResult {
    std::optional<TypeLibrary> library;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return library.has_value(); }
};

/// Parses `.sidl` source. Never throws on malformed input; recoverable
/// syntax errors are skipped so one pass can report several problems.
ParseResult parse_idl(std::string_view source);

/// Validates a programmatically assembled library, resolves named type
/// references to enum/interface kinds and (re)assigns dispatch tables.
/// Used for libraries that did not come from text, e.g. reverse generation.
ParseResult build_library(TypeLibrary draft);

/// Canonical `.sidl` text: declaration order within each section (enums,
/// then interfaces, then coclasses), four-space indent, LF line endings.
std::string emit_idl(const TypeLibrary& lib);

class ResolveError : public std::runtime_error {
public:
    enum class Reason { UnknownInterface, UnknownDispId };

    ResolveError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

struct MemberDescriptor {
    const InterfaceDef* interface = nullptr;
    DispatchEntry entry;
    const MemberDef* member = nullptr;
};

MemberDescriptor resolve_member(const TypeLibrary& lib, std::string_view interface_name,
                                std::uint32_t disp_id);

bool is_identifier(std::string_view text);
bool is_prog_id(std::string_view text);

}  // namespace sume::typelib
