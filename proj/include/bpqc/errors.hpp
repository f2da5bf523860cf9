// Copyright 2026 The bpqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file errors.hpp
 * Exception types thrown across the library.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace bpqc {

/// Invalid experiment or circuit configuration (qubit counts, pairings).
class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(const std::string &msg) : std::invalid_argument(msg) {}
};

/// Qubit or parameter index outside the valid range.
class IndexError : public std::out_of_range {
  public:
    explicit IndexError(const std::string &msg) : std::out_of_range(msg) {}
};

/// Malformed arguments: mismatched lengths, empty sets, equal control/target.
class ArgumentError : public std::invalid_argument {
  public:
    explicit ArgumentError(const std::string &msg)
        : std::invalid_argument(msg) {}
};

/// Non-finite or out-of-domain numerical intermediate.
class NumericError : public std::domain_error {
  public:
    explicit NumericError(const std::string &msg) : std::domain_error(msg) {}
};

/// Output file could not be written.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace bpqc
