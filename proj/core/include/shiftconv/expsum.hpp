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

// Exponential sums S_f(alpha) = sum_{X<=n<=2X} f(n) e(n alpha), their values
// on a DFT grid, the geometric kernel sum_{h<=H} e(alpha h), and the
// uniform-bound scans.

#ifndef SHIFTCONV_EXPSUM_HPP_
#define SHIFTCONV_EXPSUM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "shiftconv/coefficients.hpp"
#include "shiftconv/fit.hpp"
#include "shiftconv/numeric.hpp"
#include "shiftconv/parallel.hpp"

namespace shiftconv {

struct FareyDissection;

/// Values S_f(j/G) for j = 0..G-1.
struct ExpSumGrid {
  std::uint64_t X = 0;
  std::uint64_t G = 0;
  std::vector<Complex> values;
};

/// a/q + beta with gcd(a, q) = 1, 0 <= a < q, beta in [-1/2, 1/2).
struct RationalPoint {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double beta_offset = 0.0;

  double alpha() const noexcept {
    return static_cast<double>(a) / static_cast<double>(q) + beta_offset;
  }
};

/// Phase recurrence e((n+1)a) = e(na) e(a) is resynchronized from the
/// library exponential every this many terms.
inline constexpr std::uint64_t kPhaseResyncInterval = 1024;

/// S_f(alpha) by phase recurrence, compensated summation. 2X <= n_max.
Complex exp_sum(const CoefficientTable& f, std::uint64_t X, double alpha);

/// Grid of S_f via one real-input DFT of length G. G must be a power of two
/// with G >= X + 2 (GridTooSmallError otherwise). Conjugate symmetry
/// values[G-j] == conj(values[j]) holds bit for bit.
ExpSumGrid exp_sum_grid(const CoefficientTable& f, std::uint64_t X, std::uint64_t G);

/// Same transform applied to f(1..Y) (partial sums from n = 1).
ExpSumGrid prefix_exp_sum_grid(const CoefficientTable& f, std::uint64_t Y, std::uint64_t G);

/// (1/G) sum_j |values[j]|^2, which equals sum |f(n)|^2 over the support.
double grid_mean_square(const ExpSumGrid& grid);

/// sum_{h=1}^H e(alpha h) in closed form; exactly H when alpha is an integer.
Complex geometric_kernel(double alpha, std::uint64_t H);

/// min(H, 1/(2 ||alpha||)), the bound the kernel obeys.
double geometric_kernel_bound(double alpha, std::uint64_t H);

struct KernelMassReport {
  std::uint64_t Q = 0;
  std::uint64_t H = 0;
  double mass = 0.0;       // max over sampled beta
  double best_beta = 0.0;  // beta attaining it
  double ratio = 0.0;      // mass / (Q^2 log Q); 0 when Q = 1
  std::size_t fractions = 0;
};

/// max_beta sum_{q>1} sum_{(a,q)=1} |sum_{h<=H} e((a/q + beta) h)| over the
/// non-principal arcs of `dissection`. beta runs over `beta_samples` evenly
/// spaced points of [-1/(2Q^2), 1/(2Q^2)] plus beta = 0.
KernelMassReport kernel_level_mass(std::uint64_t H, const FareyDissection& dissection,
                                   std::size_t beta_samples = 9);

enum class ScanMode {
  kGridMax,        // max over the DFT grid of |sum_{n<=X} f(n) e(n alpha)|
  kPartialSumMax,  // max_{Y<=X} |sum_{n<=Y} f(n)|, the alpha = 0 branch
};

struct ScanRow {
  std::uint64_t X = 0;
  double max_abs = 0.0;
  double ratio = 0.0;  // max_abs / X^theoretical_exponent
};

struct ScanReport {
  ScanMode mode = ScanMode::kGridMax;
  double theoretical_exponent = 0.0;
  std::uint64_t oversample = 0;
  std::vector<ScanRow> rows;  // ordered as X_list
  /// log max_abs against log X; absent with fewer than 3 rows or a zero row.
  std::optional<ExponentFit> fit;
};

/// For each X computes the maximum M(X) described by `mode`; grid mode uses a
/// DFT of length bit_ceil(oversample * X). Rows are evaluated in parallel.
ScanReport uniform_bound_scan(const CoefficientTable& f, std::span<const std::uint64_t> X_list,
                              std::uint64_t oversample, double theoretical_exponent,
                              ScanMode mode, const Executor& executor = Executor{1});

/// Binary export: X and G as little-endian uint64, then G (re, im) pairs of
/// little-endian IEEE doubles.
void save_grid_binary(const ExpSumGrid& grid, const std::filesystem::path& path);
ExpSumGrid load_grid_binary(const std::filesystem::path& path);

}  // namespace shiftconv

#endif  // SHIFTCONV_EXPSUM_HPP_
