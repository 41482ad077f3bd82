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

// Shifted convolution sums S(X,h;f,g) = sum_{X<=n<=2X-h} f(n) conj(g(n+h)),
// their averages over 1 <= h <= H, and the window statistics behind the
// F-class membership test.

#ifndef SHIFTCONV_SUMS_HPP_
#define SHIFTCONV_SUMS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "shiftconv/coefficients.hpp"
#include "shiftconv/numeric.hpp"
#include "shiftconv/parallel.hpp"

namespace shiftconv {

struct ShiftedSumSpec {
  std::uint64_t X = 0;
  std::uint64_t H = 0;
  CoefficientTable f;
  CoefficientTable g;
  /// w(h) for h = 1..H; w == 1 when absent.
  std::optional<CoefficientTable> weight;
};

/// Throws PreconditionError/RangeError when `spec` breaks H < X, the 2X
/// coverage of f and g, or weight coverage of H.
void validate(const ShiftedSumSpec& spec);

struct ShiftedSumResult {
  std::vector<Complex> per_h;  // index h - 1
  Complex aggregate;
  double abs_aggregate = 0.0;
};

/// Cumulative sums L[n] = g(1) + ... + g(n), L[0] = 0, carried in
/// double-double so window differences are accurate to the last bit of the
/// window sum rather than of the running total.
class PartialSumTable {
 public:
  explicit PartialSumTable(const CoefficientTable& g);

  std::size_t n_max() const noexcept { return cumulative_.size() - 1; }
  double at(std::size_t n) const noexcept { return cumulative_[n].value(); }
  /// sum_{a < m <= b} g(m), for a <= b <= n_max.
  double window(std::size_t a, std::size_t b) const noexcept {
    return dd_difference(cumulative_[b], cumulative_[a]);
  }

 private:
  std::vector<DoubleDouble> cumulative_;
};

/// S(X,h;f,g), compensated, left to right in n. Requires 2X <= n_max of both
/// tables and h <= X (RangeError / PreconditionError).
Complex shifted_sum(const CoefficientTable& f, const CoefficientTable& g, std::uint64_t X,
                    std::uint64_t h);

/// sum_{h<=H} w(h) S(X,h;f,g). Shifts are evaluated in parallel; the
/// aggregate is reduced in h order, so the result does not depend on the
/// executor size.
ShiftedSumResult averaged_shifted_sum(const ShiftedSumSpec& spec,
                                      const Executor& executor = Executor{1});

/// The same unweighted double sum with the order exchanged:
///   sum_{n=X}^{2X-1} f(n) conj(L[min(n+H, 2X)] - L[n]),
/// which covers exactly {(n,h) : X <= n <= 2X-h, 1 <= h <= H}.
Complex reordered_average(const CoefficientTable& f, const PartialSumTable& g_partial,
                          std::uint64_t X, std::uint64_t H,
                          const Executor& executor = Executor{1});
Complex reordered_average(const CoefficientTable& f, const CoefficientTable& g,
                          std::uint64_t X, std::uint64_t H,
                          const Executor& executor = Executor{1});

/// sum_{X<=n<=2X} |f(n)|^2.
double second_moment(const CoefficientTable& f, std::uint64_t X);

/// Window variance sum_{x=X}^{2X-1} |sum_{|x-n|<=A} f(n)|^2 (unit steps) and
/// the second moment. Window sums slide incrementally; requires A >= 1,
/// X > A and 2X + A <= n_max.
FClassStats fclass_stats(const CoefficientTable& f, std::uint64_t X, double A,
                         const Executor& executor = Executor{1});

}  // namespace shiftconv

#endif  // SHIFTCONV_SUMS_HPP_
