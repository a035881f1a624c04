/*
 Copyright 2026 The pchdkit authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef PCHD_ERRORS_HPP
#define PCHD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pchd {

/// Bad numeric input: non-finite entries, asymmetric where symmetry is
/// required, invalid ranges.
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Incompatible matrix/vector dimensions.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Malformed or inconsistent data files (CSV/JSON parse and schema errors,
/// missing derivative columns).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at runtime, e.g. a diverging simulation.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Command-line usage or configuration error.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pchd

#endif // PCHD_ERRORS_HPP
