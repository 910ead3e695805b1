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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sume::orb {

enum class FaultCode : std::uint32_t {
    ProgIdUnknown = 1,
    ObjectNotFound = 2,
    MemberNotFound = 3,
    TypeMismatch = 4,
    AppFault = 5,
    Protocol = 6,
    AccessDenied = 7,
};

/// "E_PROGID_UNKNOWN", ... ; "E_UNKNOWN" for unregistered codes.
std::string_view fault_name(FaultCode code);
std::optional<FaultCode> fault_from_name(std::string_view name);
bool is_registered_fault(std::uint32_t raw);

/// A fault crossing the bridge. Components throw it to fail a call with a
/// specific code; clients catch it with the server's message intact, so
/// what() is exactly the message the component raised.
class ComException : public std::runtime_error {
public:
    ComException(FaultCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    FaultCode code() const { return code_; }
    std::string message() const { return what(); }
    const std::string& detail() const { return detail_; }

private:
    FaultCode code_;
    std::string detail_;
};

/// Shorthand for the common component failure.
[[noreturn]] inline void app_fault(const std::string& message) {
    throw ComException(FaultCode::AppFault, message);
}

/// Connection-level failure: refused, reset, timed out.
class TransportError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sume::orb
