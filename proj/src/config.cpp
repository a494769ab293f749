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

#include "bmolab/config.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace bmolab {

std::uint64_t enumeration_cap() {
  const char* env = std::getenv("BMO_LAB_MAX_ENUM");
  if (env == nullptr || *env == '\0') return kDefaultEnumerationCap;
  std::uint64_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) {
    return kDefaultEnumerationCap;
  }
  return value;
}

}  // namespace bmolab
