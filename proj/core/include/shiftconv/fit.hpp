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

#ifndef SHIFTCONV_FIT_HPP_
#define SHIFTCONV_FIT_HPP_

#include <span>
#include <utility>
#include <vector>

namespace shiftconv {

/// Least-squares line through (ln x, ln y).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (ln x, ln y)
  double residual_max = 0.0;
};

/// Needs at least 3 points with x, y > 0 (PreconditionError) and not all x
/// equal (DegenerateInputError). When every y is equal r_squared is 1.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> points);

}  // namespace shiftconv

#endif  // SHIFTCONV_FIT_HPP_
