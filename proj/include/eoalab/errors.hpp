// Copyright 2026 The eoalab Authors
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
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace eoalab {

/// Raised when an input violates a documented precondition (bad label,
/// non-normalized state, dimension mismatch, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a run would allocate an operator larger than the memory cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMemoryCapBytes = std::size_t{2} << 30;

/// Memory budget for a single dense operator. EOALAB_MEM_CAP_MB overrides
/// the 2 GiB default.
inline std::size_t memory_cap_bytes() {
  if (const char* env = std::getenv("EOALAB_MEM_CAP_MB")) {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && mb > 0) {
      return static_cast<std::size_t>(mb) << 20;
    }
  }
  return kDefaultMemoryCapBytes;
}

/// Throws ResourceCapExceeded if a complex matrix of rows x cols exceeds cap.
inline void check_operator_size(double rows, double cols, std::size_t cap,
                                const std::string& what) {
  const double bytes = rows * cols * 16.0;
  if (bytes > static_cast<double>(cap)) {
    throw ResourceCapExceeded(what + " needs " +
                              std::to_string(static_cast<std::uint64_t>(bytes)) +
                              " bytes, cap is " + std::to_string(cap));
  }
}

}  // namespace eoalab
