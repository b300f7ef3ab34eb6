// SPDX-License-Identifier: Apache-2.0
//
// capa: mutual-coupling-aware beamforming for continuous aperture arrays
// Copyright (C) 2026 The capa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace capa
{

enum class ErrorKind
{
    domain,        // argument outside the mathematical domain
    singularity,   // evaluation at a singular point
    contract,      // violated precondition (dimension mismatch, overlap, ...)
    numeric,       // loss of definiteness, failed factorization, bad Newton
    ill_conditioned,
    convergence,   // iteration budget exhausted
    configuration  // bad user input in the experiment driver
};

inline const char *to_string(ErrorKind k)
{
    switch (k)
    {
    case ErrorKind::domain: return "domain";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::contract: return "contract";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::ill_conditioned: return "ill_conditioned";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::configuration: return "configuration";
    }
    return "unknown";
}

/// Process exit status used by the command line driver for each error kind.
/// 2 = configuration / bad input, 3 = numeric or convergence failure.
inline int exit_code(ErrorKind k)
{
    switch (k)
    {
    case ErrorKind::domain:
    case ErrorKind::contract:
    case ErrorKind::configuration: return 2;
    default: return 3;
    }
}

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, std::string_view module, const std::string &message)
        : std::runtime_error(std::string(module) + ": " + message), kind_(kind), module_(module), message_(message)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    const std::string &module() const noexcept { return module_; }
    const std::string &message() const noexcept { return message_; }

  private:
    ErrorKind kind_;
    std::string module_;
    std::string message_;
};

namespace detail
{
inline void require(bool ok, ErrorKind kind, std::string_view module, const std::string &message)
{
    if (!ok)
        throw Error(kind, module, message);
}
} // namespace detail

} // namespace capa
