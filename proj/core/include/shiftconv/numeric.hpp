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

// Compensated accumulation and small numeric helpers shared by every module.
// All sums are evaluated strictly left to right; nothing here reorders.

#ifndef SHIFTCONV_NUMERIC_HPP_
#define SHIFTCONV_NUMERIC_HPP_

#include <cmath>
#include <complex>
#include <numbers>

namespace shiftconv {

using Complex = std::complex<double>;

/// Error-free transformation: a + b == sum + err exactly.
struct TwoSumResult {
  double sum;
  double err;
};

inline TwoSumResult two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

/// Neumaier's variant of Kahan summation. Robust when an addend is larger in
/// magnitude than the running sum.
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(double init) : sum_(init) {}

  void add(double x) noexcept {
    const auto [s, e] = two_sum(sum_, x);
    sum_ = s;
    comp_ += e;
  }
  KahanSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  /// Folds another accumulator in: its value, then its compensation.
  void merge(const KahanSum& other) noexcept {
    add(other.sum_);
    comp_ += other.comp_;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexKahanSum {
 public:
  void add(Complex z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  ComplexKahanSum& operator+=(Complex z) noexcept {
    add(z);
    return *this;
  }
  void merge(const ComplexKahanSum& other) noexcept {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  Complex value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

/// Unnormalized double-double (hi + lo). Used for prefix sums so that window
/// differences keep ~100 bits of the running total.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  void add(double x) noexcept {
    const auto [s, e] = two_sum(hi, x);
    hi = s;
    lo += e;
  }
  double value() const noexcept { return hi + lo; }
};

/// b - a for two double-double values, rounded once to double.
inline double dd_difference(const DoubleDouble& b, const DoubleDouble& a) noexcept {
  const auto [s, e] = two_sum(b.hi, -a.hi);
  return s + (e + (b.lo - a.lo));
}

/// e(x) = exp(2 pi i x). The argument is reduced modulo 1 first so the
/// phase is accurate for large x.
inline Complex unit_phase(double x) noexcept {
  const double r = x - std::floor(x);
  const double t = 2.0 * std::numbers::pi * r;
  return {std::cos(t), std::sin(t)};
}

/// e(n alpha) with the product n * alpha reduced modulo 1 using the exact
/// rounding error of the multiplication.
inline Complex phase_of(double n, double alpha) noexcept {
  const double prod = n * alpha;
  const double err = std::fma(n, alpha, -prod);
  const double frac = (prod - std::floor(prod)) + err;
  return unit_phase(frac);
}

/// Distance from x to the nearest integer, in [0, 1/2].
inline double dist_to_int(double x) noexcept {
  return std::abs(x - std::nearbyint(x));
}

}  // namespace shiftconv

#endif  // SHIFTCONV_NUMERIC_HPP_
