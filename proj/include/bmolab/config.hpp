// Copyright 2026 The bmolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bmolab {

// Raised when an instance is too large for the requested algorithm
// (tree depth/node caps, stopping-time or subset enumeration caps).
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by loaders on malformed or invariant-violating documents. `path`
// is a JSON pointer to the offending node.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string path, std::string message)
      : std::runtime_error(path + ": " + message),
        path_(std::move(path)),
        message_(std::move(message)) {}
  const std::string& path() const noexcept { return path_; }
  // The description without the path.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

inline constexpr int kMaxDepth = 20;
inline constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Tolerances used across the library.
inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kMartingaleTolerance = 1e-10;

// Enumeration cap for brute-force modes; `BMO_LAB_MAX_ENUM` overrides the
// default of 10^6.
std::uint64_t enumeration_cap();

}  // namespace bmolab
