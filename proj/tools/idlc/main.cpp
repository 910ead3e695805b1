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

// sume-idlc: type library compiler. Checks a .sidl file and writes the
// proxy manifest, C++ proxies, TypeScript proxies or normalized IDL.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sume/proxygen/proxygen.hpp"
#include "sume/typelib/typelib.hpp"

namespace {

bool write_if_changed(const std::string& path, const std::string& text) {
    {
        std::ifstream in(path, std::ios::binary);
        if (in) {
            std::ostringstream old;
            old << in.rdbuf();
            if (old.str() == text) return true;
        }
    }
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        std::cerr << "sume-idlc: cannot write " << path << "\n";
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SUME type library compiler"};
    std::string input, manifest_out, cpp_out, ts_out, idl_out;
    app.add_option("input", input, "Type library (.sidl)")->required();
    app.add_option("--manifest", manifest_out, "Write the proxy manifest (JSON)");
    app.add_option("--cpp", cpp_out, "Write C++ proxies");
    app.add_option("--ts", ts_out, "Write TypeScript proxies");
    app.add_option("--emit", idl_out, "Write normalized IDL");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << "sume-idlc: cannot read " << input << "\n";
        return 1;
    }
    std::ostringstream source;
    source << in.rdbuf();
    auto parsed = sume::typelib::parse_idl(source.str());
    if (!parsed.ok()) {
        for (const auto& d : parsed.diagnostics) std::cerr << input << ":" << d.to_string() << "\n";
        return 1;
    }
    auto manifest = sume::proxygen::generate_manifest(*parsed.library);
    auto stubs = sume::proxygen::emit_stub_hooks(manifest);
    bool ok = true;
    if (!manifest_out.empty()) ok &= write_if_changed(manifest_out, sume::proxygen::to_json(manifest));
    if (!cpp_out.empty()) ok &= write_if_changed(cpp_out, sume::proxygen::render_cpp(stubs));
    if (!ts_out.empty()) ok &= write_if_changed(ts_out, sume::proxygen::render_typescript(stubs));
    if (!idl_out.empty()) ok &= write_if_changed(idl_out, sume::typelib::emit_idl(*parsed.library));
    return ok ? 0 : 1;
}
