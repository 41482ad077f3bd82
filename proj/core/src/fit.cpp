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

#include "shiftconv/fit.hpp"

#include <algorithm>
#include <cmath>

#include "shiftconv/errors.hpp"
#include "shiftconv/numeric.hpp"

namespace shiftconv {

ExponentFit fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw PreconditionError("fit_exponent: need at least 3 points");
  ExponentFit fit;
  fit.points.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw PreconditionError("fit_exponent: points must be positive and finite");
    }
    fit.points.emplace_back(std::log(x), std::log(y));
  }
  const double n = static_cast<double>(fit.points.size());
  KahanSum sx;
  KahanSum sy;
  for (const auto& [lx, ly] : fit.points) {
    sx.add(lx);
    sy.add(ly);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  KahanSum sxx;
  KahanSum sxy;
  KahanSum syy;
  for (const auto& [lx, ly] : fit.points) {
    sxx.add((lx - mx) * (lx - mx));
    sxy.add((lx - mx) * (ly - my));
    syy.add((ly - my) * (ly - my));
  }
  if (sxx.value() == 0.0) throw DegenerateInputError("fit_exponent: all x are equal");
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  KahanSum ss_res;
  for (const auto& [lx, ly] : fit.points) {
    const double r = ly - (fit.intercept + fit.slope * lx);
    ss_res.add(r * r);
    fit.residual_max = std::max(fit.residual_max, std::abs(r));
  }
  // A flat series can leave ulp-level scatter after the mean is subtracted.
  const bool flat = syy.value() <= 1e-28 * n * (1.0 + my * my);
  fit.r_squared =
      flat ? 1.0 : std::clamp(1.0 - ss_res.value() / syy.value(), 0.0, 1.0);
  return fit;
}

}  // namespace shiftconv
