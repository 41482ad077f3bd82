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

// Coefficient tables shared across test files. Each is computed once per
// test binary.

#ifndef SHIFTCONV_TESTS_FIXTURES_HPP_
#define SHIFTCONV_TESTS_FIXTURES_HPP_

#include <cstddef>

#include "shiftconv/coefficients.hpp"

namespace shiftconv::testing {

/// Length of the shared lambda table; enough for X up to 2^16 plus windows.
inline constexpr std::size_t kSharedLambdaN = std::size_t{1} << 18;

inline const ExactTauTable& shared_tau() {
  static const ExactTauTable tau = compute_tau(kSharedLambdaN);
  return tau;
}

inline const CoefficientTable& shared_lambda() {
  static const CoefficientTable lam = normalize_gl2(shared_tau());
  return lam;
}

}  // namespace shiftconv::testing

#endif  // SHIFTCONV_TESTS_FIXTURES_HPP_
