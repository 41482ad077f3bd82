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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shiftconv/arcs.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/expsum.hpp"
#include "shiftconv/sums.hpp"

namespace shiftconv {
namespace {

using testing::direct_exp_sum;
using testing::relative_error;
using testing::shared_lambda;

CoefficientTable indicator(std::size_t n_max, std::size_t n0) {
  std::vector<double> v(n_max, 0.0);
  v[n0 - 1] = 1.0;
  return CoefficientTable::user(std::move(v));
}

TEST(ExpSum, AlphaZeroIsPlainSum) {
  const auto& lam = shared_lambda();
  long double want = 0;
  for (int n = 500; n <= 1000; ++n) want += lam(n);
  const Complex s = exp_sum(lam, 500, 0.0);
  EXPECT_EQ(s.imag(), 0.0);
  EXPECT_NEAR(s.real(), static_cast<double>(want), 1e-12);
}

TEST(ExpSum, IndicatorHasUnitModulus) {
  const auto f = indicator(400, 137);
  for (double alpha : {0.1, 0.37, 0.5, 0.999}) {
    const Complex s = exp_sum(f, 100, alpha);
    EXPECT_NEAR(std::abs(s), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(s - testing::e(137 * alpha)), 0.0, 1e-12);
  }
}

TEST(ExpSum, MatchesDirectOracle) {
  const auto& lam = shared_lambda();
  const Complex got = exp_sum(lam, 1000, 1.0 / 3.0);
  const Complex want = direct_exp_sum(lam, 1000, 1.0L / 3.0L);
  EXPECT_LT(std::abs(got - want), 1e-10 * std::max(1.0, std::abs(want)));
  // Long sums exercise the phase resynchronization.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    const double alpha = u(rng);
    const Complex a = exp_sum(lam, 50000, alpha);
    const Complex b = direct_exp_sum(lam, 50000, alpha);
    EXPECT_LT(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(b))) << alpha;
  }
}

TEST(ExpSum, RangeError) {
  EXPECT_THROW(exp_sum(indicator(100, 1), 51, 0.1), RangeError);
}

TEST(ExpSumGridTest, SingleSupport) {
  const auto grid = exp_sum_grid(indicator(200, 77), 50, 128);
  ASSERT_EQ(grid.values.size(), 128u);
  for (const auto& v : grid.values) EXPECT_NEAR(std::abs(v), 1.0, 1e-13);
}

TEST(ExpSumGridTest, Parseval) {
  const auto& lam = shared_lambda();
  for (std::uint64_t X : {1000u, 1024u, 16384u}) {
    for (std::uint64_t G : {std::bit_ceil(X + 2), std::bit_ceil(8 * X)}) {
      const auto grid = exp_sum_grid(lam, X, G);
      const double sm = second_moment(lam, X);
      EXPECT_LE(std::abs(grid_mean_square(grid) - sm), 1e-9 * sm) << X << " " << G;
    }
  }
}

TEST(ExpSumGridTest, MatchesDirectAtRandomPoints) {
  const auto& lam = shared_lambda();
  const std::uint64_t X = 1 << 10, G = 1 << 13;
  const auto grid = exp_sum_grid(lam, X, G);
  std::mt19937_64 rng(16);
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t j = rng() % G;
    const Complex want = direct_exp_sum(lam, X, static_cast<long double>(j) / G);
    EXPECT_LT(relative_error(grid.values[j], want), 1e-9) << j;
    EXPECT_LT(std::abs(exp_sum(lam, X, static_cast<double>(j) / G) - grid.values[j]),
              1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(ExpSumGridTest, ConjugateSymmetryIsExact) {
  const auto& lam = shared_lambda();
  const auto grid = exp_sum_grid(lam, 3000, 8192);
  EXPECT_EQ(grid.values[0].imag(), 0.0);
  for (std::size_t j = 1; j < grid.G; ++j) {
    ASSERT_EQ(grid.values[grid.G - j], std::conj(grid.values[j])) << j;
  }
}

TEST(ExpSumGridTest, Errors) {
  const auto& lam = shared_lambda();
  EXPECT_THROW(exp_sum_grid(lam, 1000, 1000), GridTooSmallError);
  EXPECT_THROW(exp_sum_grid(lam, 1023, 1024), GridTooSmallError);
  EXPECT_THROW(exp_sum_grid(indicator(100, 1), 51, 128), RangeError);
}

TEST(ExpSumGridTest, PrefixGrid) {
  const auto& lam = shared_lambda();
  const auto grid = prefix_exp_sum_grid(lam, 1000, 2048);
  long double s = 0;
  for (int n = 1; n <= 1000; ++n) s += lam(n);
  EXPECT_NEAR(grid.values[0].real(), static_cast<double>(s), 1e-12);
  std::complex<long double> direct = 0;
  for (int n = 1; n <= 1000; ++n) {
    direct += static_cast<long double>(lam(n)) *
              std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * ((n * 5) % 2048) / 2048.0L);
  }
  EXPECT_LT(std::abs(grid.values[5] - Complex(static_cast<double>(direct.real()),
                                              static_cast<double>(direct.imag()))),
            1e-11);
}

TEST(ExpSumGridTest, BinaryRoundTrip) {
  const auto& lam = shared_lambda();
  const auto grid = exp_sum_grid(lam, 100, 256);
  const auto path = std::filesystem::temp_directory_path() / "shiftconv_grid_test.bin";
  save_grid_binary(grid, path);
  EXPECT_EQ(std::filesystem::file_size(path), 16u + 256u * 16u);
  const auto back = load_grid_binary(path);
  EXPECT_EQ(back.X, grid.X);
  EXPECT_EQ(back.G, grid.G);
  EXPECT_EQ(back.values, grid.values);
}

// Geometric kernel -------------------------------------------------------------

Complex direct_kernel(double alpha, std::uint64_t H) {
  Complex s = 0;
  for (std::uint64_t h = 1; h <= H; ++h) s += testing::e(alpha * static_cast<double>(h));
  return s;
}

TEST(GeometricKernel, Examples) {
  EXPECT_EQ(geometric_kernel(0.0, 17), Complex(17.0, 0.0));
  EXPECT_EQ(geometric_kernel(3.0, 5), Complex(5.0, 0.0));
  EXPECT_NEAR(std::abs(geometric_kernel(0.5, 2)), 0.0, 1e-15);
  EXPECT_LT(std::abs(geometric_kernel(0.2, 7) - direct_kernel(0.2, 7)), 1e-12);
  EXPECT_EQ(geometric_kernel(0.3, 0), Complex(0.0));
}

TEST(GeometricKernel, MatchesDirectSum) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double alpha = u(rng);
    const std::uint64_t H = 1 + rng() % 300;
    EXPECT_LT(std::abs(geometric_kernel(alpha, H) - direct_kernel(alpha, H)), 1e-10)
        << alpha << " " << H;
  }
}

TEST(GeometricKernel, ObeysBound) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double alpha = i % 10 == 0 ? std::ldexp(u(rng), -30) : u(rng);
    const std::uint64_t H = 1 + rng() % 100000;
    const double bound = geometric_kernel_bound(alpha, H);
    EXPECT_LE(bound, static_cast<double>(H));
    ASSERT_LE(std::abs(geometric_kernel(alpha, H)), bound * (1 + 1e-12)) << alpha << " " << H;
  }
  EXPECT_EQ(geometric_kernel_bound(0.0, 10), 10.0);
  EXPECT_DOUBLE_EQ(geometric_kernel_bound(0.25, 10), 2.0);
}

// Kernel mass over the minor arcs --------------------------------------------------

TEST(KernelLevelMass, QTwoHasOneFraction) {
  const auto r = kernel_level_mass(10, dirichlet_dissection(2));
  EXPECT_EQ(r.fractions, 1u);
  double best = 0;
  for (int i = 0; i < 9; ++i) {
    const double beta = -1.0 / 8 + (1.0 / 4) * i / 8.0;
    best = std::max(best, std::abs(direct_kernel(0.5 + beta, 10)));
  }
  EXPECT_NEAR(r.mass, best, 1e-10);
}

TEST(KernelLevelMass, MatchesTripleLoopAtBetaZero) {
  const std::uint64_t Q = 10, H = 100;
  const auto r = kernel_level_mass(H, dirichlet_dissection(Q), 1);
  double want = 0;
  std::size_t count = 0;
  for (std::uint64_t q = 2; q <= Q; ++q) {
    for (std::uint64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      ++count;
      want += std::abs(direct_kernel(static_cast<double>(a) / static_cast<double>(q), H));
    }
  }
  EXPECT_EQ(r.fractions, count);
  EXPECT_EQ(r.best_beta, 0.0);
  EXPECT_NEAR(r.mass, want, 1e-9 * want);
}

TEST(KernelLevelMass, RatioBoundedAcrossQ) {
  double lo = 1e300, hi = 0;
  for (std::uint64_t Q = 10; Q <= 100; Q += 10) {
    const auto r = kernel_level_mass(Q * Q, dirichlet_dissection(Q));
    ASSERT_TRUE(std::isfinite(r.ratio));
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 2.0);
  EXPECT_LT(hi / lo, 3.0);
}

// Uniform-bound scans ---------------------------------------------------------

TEST(UniformBoundScan, IndicatorOfOne) {
  const auto f = indicator(1 << 12, 1);
  const std::vector<std::uint64_t> xs = {256, 512, 1024, 2048, 4096};
  for (auto mode : {ScanMode::kPartialSumMax, ScanMode::kGridMax}) {
    const auto r = uniform_bound_scan(f, xs, 4, 0.5, mode);
    for (const auto& row : r.rows) EXPECT_NEAR(row.max_abs, 1.0, 1e-12);
    ASSERT_TRUE(r.fit.has_value());
    EXPECT_NEAR(r.fit->slope, 0.0, 1e-12);
  }
}

TEST(UniformBoundScan, PartialSumMatchesBruteForce) {
  const auto& lam = shared_lambda();
  const std::vector<std::uint64_t> xs = {1000, 5000, 20000};
  const auto r = uniform_bound_scan(lam, xs, 1, 1.0 / 3.0, ScanMode::kPartialSumMax, Executor(3));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    long double s = 0, best = 0;
    for (std::uint64_t n = 1; n <= xs[i]; ++n) {
      s += lam(n);
      best = std::max(best, std::abs(s));
    }
    EXPECT_NEAR(r.rows[i].max_abs, static_cast<double>(best), 1e-10);
    EXPECT_DOUBLE_EQ(r.rows[i].ratio, r.rows[i].max_abs / std::cbrt(static_cast<double>(xs[i])));
  }
}

TEST(UniformBoundScan, GridMaxGrowsLikeSquareRoot) {
  const auto& lam = shared_lambda();
  std::vector<std::uint64_t> xs;
  for (int e = 10; e <= 17; ++e) xs.push_back(std::uint64_t{1} << e);
  const auto r = uniform_bound_scan(lam, xs, 4, 0.5, ScanMode::kGridMax);
  ASSERT_TRUE(r.fit.has_value());
  EXPECT_LE(r.fit->slope, 0.62);
  EXPECT_GT(r.fit->slope, 0.2);
}

TEST(UniformBoundScan, Errors) {
  const auto& lam = shared_lambda();
  const std::vector<std::uint64_t> too_big = {lam.n_max() + 1};
  EXPECT_THROW(uniform_bound_scan(lam, too_big, 1, 0.5, ScanMode::kPartialSumMax), RangeError);
  const std::vector<std::uint64_t> ok = {100};
  EXPECT_THROW(uniform_bound_scan(lam, ok, 0, 0.5, ScanMode::kGridMax), PreconditionError);
  const auto single = uniform_bound_scan(lam, ok, 1, 0.5, ScanMode::kPartialSumMax);
  EXPECT_FALSE(single.fit.has_value());
}

}  // namespace
}  // namespace shiftconv
