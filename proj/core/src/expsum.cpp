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

#include "shiftconv/expsum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>

#include "shiftconv/arcs.hpp"
#include "shiftconv/errors.hpp"

namespace shiftconv {
namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

class RealToComplexPlan {
 public:
  explicit RealToComplexPlan(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (!in_ || !out_) throw ResourceLimitError("FFT buffer allocation failed");
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error("FFTW planning failed");
  }
  ~RealToComplexPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealToComplexPlan(const RealToComplexPlan&) = delete;
  RealToComplexPlan& operator=(const RealToComplexPlan&) = delete;

  double* input() noexcept { return in_.get(); }
  const fftw_complex* output() const noexcept { return out_.get(); }
  void execute() noexcept { fftw_execute(plan_); }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

bool is_pow2(std::uint64_t g) { return g != 0 && (g & (g - 1)) == 0; }

// Places f(n) for n in [first, last] at slot n mod G and returns S(j/G) for
// all j. The forward transform carries e(-x); conjugating gives e(+x).
ExpSumGrid grid_from_range(const CoefficientTable& f, std::uint64_t first, std::uint64_t last,
                           std::uint64_t G) {
  RealToComplexPlan plan(G);
  double* in = plan.input();
  std::memset(in, 0, sizeof(double) * G);
  const double* fv = f.data();
  for (std::uint64_t n = first; n <= last; ++n) in[n % G] = fv[n];
  plan.execute();
  const fftw_complex* out = plan.output();

  ExpSumGrid grid;
  grid.G = G;
  grid.values.resize(G);
  for (std::uint64_t j = 0; j <= G / 2; ++j) {
    grid.values[j] = Complex(out[j][0], -out[j][1]);
  }
  for (std::uint64_t j = G / 2 + 1; j < G; ++j) grid.values[j] = std::conj(grid.values[G - j]);
  return grid;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw ParseError("truncated grid file", 0);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Complex exp_sum(const CoefficientTable& f, std::uint64_t X, double alpha) {
  if (f.n_max() < 2 * X) throw RangeError("exp_sum: table shorter than 2X");
  const double* fv = f.data();
  const Complex step = phase_of(1.0, alpha);
  ComplexKahanSum acc;
  Complex phase;
  for (std::uint64_t n = X, k = 0; n <= 2 * X; ++n, ++k) {
    if (k % kPhaseResyncInterval == 0) {
      phase = phase_of(static_cast<double>(n), alpha);
    } else {
      phase *= step;
    }
    acc.add(fv[n] * phase);
  }
  return acc.value();
}

ExpSumGrid exp_sum_grid(const CoefficientTable& f, std::uint64_t X, std::uint64_t G) {
  if (!is_pow2(G)) throw GridTooSmallError("exp_sum_grid: G must be a power of two");
  if (G < X + 2) {
    throw GridTooSmallError("exp_sum_grid: G = " + std::to_string(G) + " < X + 2 = " +
                            std::to_string(X + 2));
  }
  if (f.n_max() < 2 * X) throw RangeError("exp_sum_grid: table shorter than 2X");
  ExpSumGrid grid = grid_from_range(f, X, 2 * X, G);
  grid.X = X;
  return grid;
}

ExpSumGrid prefix_exp_sum_grid(const CoefficientTable& f, std::uint64_t Y, std::uint64_t G) {
  if (!is_pow2(G) || G < Y + 1) throw GridTooSmallError("prefix_exp_sum_grid: G too small");
  if (f.n_max() < Y) throw RangeError("prefix_exp_sum_grid: table shorter than Y");
  ExpSumGrid grid = grid_from_range(f, 1, Y, G);
  grid.X = Y;
  return grid;
}

double grid_mean_square(const ExpSumGrid& grid) {
  KahanSum acc;
  for (const auto& v : grid.values) acc.add(std::norm(v));
  return acc.value() / static_cast<double>(grid.G);
}

Complex geometric_kernel(double alpha, std::uint64_t H) {
  const double r = alpha - std::nearbyint(alpha);  // in [-1/2, 1/2]
  if (r == 0.0) return {static_cast<double>(H), 0.0};
  const double h = static_cast<double>(H);
  // e(r (H+1)/2) sin(pi H r) / sin(pi r)
  const double prod = h * r;
  const double t = std::fmod(prod, 2.0) + std::fma(h, r, -prod);
  const double amp = std::sin(std::numbers::pi * t) / std::sin(std::numbers::pi * r);
  return amp * phase_of((h + 1.0) / 2.0, r);
}

double geometric_kernel_bound(double alpha, std::uint64_t H) {
  const double d = dist_to_int(alpha);
  const double h = static_cast<double>(H);
  return d == 0.0 ? h : std::min(h, 1.0 / (2.0 * d));
}

KernelMassReport kernel_level_mass(std::uint64_t H, const FareyDissection& dissection,
                                   std::size_t beta_samples) {
  KernelMassReport report;
  report.Q = dissection.Q;
  report.H = H;
  const double q = static_cast<double>(dissection.Q);
  const double half_width = 1.0 / (2.0 * q * q);
  std::vector<double> betas{0.0};
  for (std::size_t i = 0; i < beta_samples; ++i) {
    const double t = beta_samples == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(beta_samples - 1);
    const double b = -half_width + 2.0 * half_width * t;
    if (b != 0.0) betas.push_back(b);
  }
  for (const auto& arc : dissection.arcs) {
    if (arc.q > 1) ++report.fractions;
  }
  report.mass = -1.0;
  for (const double beta : betas) {
    KahanSum acc;
    for (const auto& arc : dissection.arcs) {
      if (arc.q <= 1) continue;
      const double alpha = static_cast<double>(arc.a) / static_cast<double>(arc.q) + beta;
      acc.add(std::abs(geometric_kernel(alpha, H)));
    }
    if (acc.value() > report.mass) {
      report.mass = acc.value();
      report.best_beta = beta;
    }
  }
  report.ratio = dissection.Q > 1 ? report.mass / (q * q * std::log(q)) : 0.0;
  return report;
}

ScanReport uniform_bound_scan(const CoefficientTable& f, std::span<const std::uint64_t> X_list,
                              std::uint64_t oversample, double theoretical_exponent,
                              ScanMode mode, const Executor& executor) {
  if (oversample == 0) throw PreconditionError("uniform_bound_scan: oversample must be >= 1");
  for (const auto X : X_list) {
    if (X == 0) throw PreconditionError("uniform_bound_scan: X must be positive");
    if (f.n_max() < X) throw RangeError("uniform_bound_scan: table shorter than X");
  }
  ScanReport report;
  report.mode = mode;
  report.theoretical_exponent = theoretical_exponent;
  report.oversample = oversample;
  report.rows.resize(X_list.size());
  executor.for_each_index(X_list.size(), [&](std::size_t i) {
    const std::uint64_t X = X_list[i];
    double best = 0.0;
    if (mode == ScanMode::kPartialSumMax) {
      const double* fv = f.data();
      KahanSum acc;
      for (std::uint64_t n = 1; n <= X; ++n) {
        acc.add(fv[n]);
        best = std::max(best, std::abs(acc.value()));
      }
    } else {
      const std::uint64_t G = std::bit_ceil(std::max<std::uint64_t>(oversample * X, X + 1));
      const ExpSumGrid grid = prefix_exp_sum_grid(f, X, G);
      for (const auto& v : grid.values) best = std::max(best, std::abs(v));
    }
    report.rows[i] = ScanRow{X, best, best / std::pow(static_cast<double>(X), theoretical_exponent)};
  });
  const bool positive = std::all_of(report.rows.begin(), report.rows.end(),
                                    [](const ScanRow& r) { return r.max_abs > 0.0; });
  if (report.rows.size() >= 3 && positive) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : report.rows) pts.emplace_back(static_cast<double>(r.X), r.max_abs);
    try {
      report.fit = fit_exponent(pts);
    } catch (const DegenerateInputError&) {
      report.fit.reset();
    }
  }
  return report;
}

void save_grid_binary(const ExpSumGrid& grid, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little,
                "grid export assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  put_u64(out, grid.X);
  put_u64(out, grid.G);
  for (const auto& v : grid.values) {
    const double pair[2] = {v.real(), v.imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof pair);
  }
  if (!out) throw Error("write failed: " + path.string());
}

ExpSumGrid load_grid_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  ExpSumGrid grid;
  grid.X = get_u64(in);
  grid.G = get_u64(in);
  grid.values.resize(grid.G);
  for (auto& v : grid.values) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof pair);
    if (!in) throw ParseError("truncated grid file", 0);
    v = Complex(pair[0], pair[1]);
  }
  return grid;
}

}  // namespace shiftconv
