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

// Dirichlet/Farey dissection of the circle, the arc-by-arc evaluation of the
// h-averaged circle-method integral, the Gallagher comparison, and the
// short-interval variance of twisted Hecke eigenvalues.

#ifndef SHIFTCONV_ARCS_HPP_
#define SHIFTCONV_ARCS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "shiftconv/coefficients.hpp"
#include "shiftconv/numeric.hpp"
#include "shiftconv/parallel.hpp"

namespace shiftconv {

using Rational = boost::rational<std::int64_t>;

/// Half-open arc [lo, hi) around a/q. The arc of 0/1 is stored with lo < 0
/// and wraps around the period.
struct FareyArc {
  std::int64_t a = 0;
  std::int64_t q = 1;
  Rational lo;
  Rational hi;

  Rational center() const { return Rational(a, q); }
  Rational length() const { return hi - lo; }
};

/// Arcs of the level-Q dissection, ordered by center; arcs[0] is 0/1.
struct FareyDissection {
  std::uint64_t Q = 0;
  std::vector<FareyArc> arcs;
};

/// Farey fractions of order Q in [0, 1), each owning the interval between
/// the mediants with its neighbours. Consecutive Farey neighbours satisfy
/// q + q' > Q, so every half-width is below 1/(qQ) and the cap never cuts.
FareyDissection dirichlet_dissection(std::uint64_t Q);

struct DissectionCheck {
  bool disjoint_and_covering = false;  // consecutive, wrapping once
  bool caps_hold = false;              // half-widths <= 1/(qQ)
  bool reduced = false;                // gcd(a,q) = 1, 0 <= a < q, q <= Q
  Rational total_length;
  bool ok() const { return disjoint_and_covering && caps_hold && reduced && total_length == Rational(1); }
};

/// Exact rational audit of the partition and cap properties.
DissectionCheck check_dissection(const FareyDissection& d);

/// Index of the arc containing num/den, which must lie in [0, 1).
std::size_t locate_arc(const FareyDissection& d, std::int64_t num, std::int64_t den);

struct ArcContribution {
  std::int64_t a = 0;
  std::int64_t q = 1;
  Complex value;
  double abs_value = 0.0;
};

struct ArcDecomposition {
  std::uint64_t X = 0, H = 0, Q = 0, G = 0;
  ArcContribution major;             // q = 1
  Complex minor_total;               // every other arc
  std::vector<ArcContribution> arcs; // all arcs, dissection order
  Complex total;                     // major + minor on the grid
  Complex exact;                     // direct double sum
  double relative_error = 0.0;       // |total - exact| / max(|exact|, 1)
  double l1_integral = 0.0;          // grid value of int_0^1 |S_f||S_g|
  double minor_kernel_sup = 0.0;     // max |K(alpha,H)| over minor grid points
  double minor_bound = 0.0;          // minor_kernel_sup * l1_integral
  double kernel_mass = 0.0;          // kernel_level_mass(H, dissection).mass
};

/// Splits sum_{h<=H} int_0^1 S_f conj(S_g) e(h alpha) d alpha over the arcs
/// of the level-Q dissection, evaluated as an exact Riemann sum on the DFT
/// grid of size G (power of two, G >= 8X).
ArcDecomposition arc_decomposed_average(const CoefficientTable& f, const CoefficientTable& g,
                                        std::uint64_t X, std::uint64_t H, std::uint64_t Q,
                                        std::uint64_t G, const Executor& executor = Executor{1});

struct GallagherReport {
  std::uint64_t X = 0;
  double theta = 0.0;
  std::uint64_t G = 0;
  double lhs = 0.0;  // int_{|beta|<theta} |S_f|^2 on the grid
  double rhs = 0.0;  // sum_{x=X/2}^{2X} |theta sum_{x<=n<=x+1/theta} f(n) 1_[X,2X](n)|^2
  std::optional<double> ratio;  // lhs / rhs; empty when rhs == 0
};

/// G = 0 selects bit_ceil(8X). theta in (0, 1/2).
GallagherReport gallagher_compare(const CoefficientTable& f, std::uint64_t X, double theta,
                                  std::uint64_t G = 0);

struct VariancePoint {
  std::uint64_t M = 0;
  double Delta = 0.0;
  std::int64_t h = 0;
  std::uint64_t k = 1;
  double variance = 0.0;
  bool max_mode = false;
  /// k <= Delta^{1/4}: the modulus range where square-root cancellation is
  /// claimed. Outside it the point is still computed.
  bool in_lemma_regime = false;

  /// variance / (M Delta log^2 M).
  double normalized() const;
};

/// sum_{x=M}^{2M} w(x), with w(x) = |sum_{x<=n<=x+U} lam(n) e(nh/k)|^2 at
/// U = floor(Delta), or its maximum over integer 0 <= U <= Delta when
/// max_mode. Requires gcd(h,k) = 1, 0 < Delta <= sqrt(M) and lam up to
/// 2M + floor(Delta).
VariancePoint short_interval_variance(const CoefficientTable& lam, std::uint64_t M,
                                      double Delta, std::int64_t h, std::uint64_t k,
                                      bool max_mode, const Executor& executor = Executor{1});

}  // namespace shiftconv

#endif  // SHIFTCONV_ARCS_HPP_
