// Copyright 2026 The Subag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBAG_ERRORS_HPP_
#define SUBAG_ERRORS_HPP_

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace subag {

// Raised when an argument falls outside the mathematical domain of an
// operation (k > n, a Gamma pole, alpha outside [M/n, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when an exact enumeration would exceed the configured evaluation
// budget. `required()` is the number of weighted evaluations that the
// computation would have needed.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(const std::string& what, double required, double cap)
      : std::runtime_error(what + " (required " + format(required) + " > cap " + format(cap) + ")"),
        required_(required),
        cap_(cap) {}

  double required() const noexcept { return required_; }
  double cap() const noexcept { return cap_; }

 private:
  static std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }

  double required_;
  double cap_;
};

// Malformed input files: CSV, JSON configs, distribution files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subag

#endif  // SUBAG_ERRORS_HPP_
