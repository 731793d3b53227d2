// Copyright 2026 The magcat Authors
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

#include <stdexcept>
#include <string>

namespace magcat {

/// Failure categories. The numeric values double as process exit codes.
enum class ErrorKind : int {
  internal = 1,
  config = 2,
  numerics = 3,
  resolution = 4,
  io = 5,
  invalid_argument = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

// Integration diverged or violated a conservation check.
struct NumericsError : Error {
  explicit NumericsError(const std::string& what) : Error(ErrorKind::numerics, what) {}
};

// A quadrature grid or projection window is too coarse for the state at hand.
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& what) : Error(ErrorKind::resolution, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

// Bad argument: dimension mismatch, out-of-range index, negative rate.
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

}  // namespace magcat
