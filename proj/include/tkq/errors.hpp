// Copyright 2026 The tkq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace tkq {

/// Malformed arguments or data (ragged matrices, bad ids, length mismatches).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// No assignment satisfies the capacity and exactly-once constraints.
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration or statevector guard was exceeded.
struct TooLarge : std::length_error {
  using std::length_error::length_error;
};

struct GenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A metric is undefined for the given data (e.g. zero variance).
struct Undefined : std::domain_error {
  using std::domain_error::domain_error;
};

/// Exact coefficients exceed the 128-bit integer evaluation range.
struct Overflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tkq
