// Copyright 2026 The shiftconv Authors
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

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#ifndef SHIFTCONV_TOOLS_CLI_HPP_
#define SHIFTCONV_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>

namespace shiftconv::cli {

/// Runs whose coefficient range exceeds 2 * kUncachedXLimit (that is,
/// X > kUncachedXLimit) only read tau from the cache and never compute it.
inline constexpr std::uint64_t kUncachedXLimit = 100'000;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // bad flags, parse errors, violated preconditions
  kExitResource = 2,  // resource limits, missing cache
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shiftconv::cli

#endif  // SHIFTCONV_TOOLS_CLI_HPP_
