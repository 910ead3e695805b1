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

#include <vector>

#include "sume/typelib/typelib.hpp"

namespace sume::typelib::detail {

struct Pos {
    int line = 0;
    int column = 0;
};

struct MemberPos {
    Pos name;
    Pos type;
    std::vector<Pos> params;
};

struct InterfacePos {
    Pos name;
    std::vector<MemberPos> members;
};

struct EnumPos {
    Pos name;
    std::vector<Pos> values;
};

struct CoclassPos {
    Pos name;
    Pos prog_id;
    std::vector<Pos> interfaces;
};

/// Source positions parallel to the model vectors. Kept out of the model so
/// structural equality ignores layout.
struct SourceMap {
    Pos library;
    std::vector<EnumPos> enums;
    std::vector<InterfacePos> interfaces;
    std::vector<CoclassPos> coclasses;
};

/// Checks every library invariant, resolves named types and assigns
/// dispatch ids. `map` may be null for libraries built in code.
void validate(TypeLibrary& lib, const SourceMap* map, std::vector<Diagnostic>& out);

}  // namespace sume::typelib::detail
