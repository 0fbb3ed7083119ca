// Copyright 2026 The onebit-ada Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace onebit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transform length is not supported (non power of two, zero).
class SizingError : public Error {
 public:
  using Error::Error;
};

/// Operands have incompatible shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A SystemConfig or sweep description violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A training set has an empty label class, so class statistics are undefined.
class DegenerateClassError : public Error {
 public:
  using Error::Error;
};

/// Raised by the boosting loop when a weak fit fails; carries the iteration.
class BoostError : public Error {
 public:
  BoostError(std::size_t iteration, const std::string& what)
      : Error("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace onebit
