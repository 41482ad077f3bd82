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

#include "shiftconv/arcs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "shiftconv/errors.hpp"
#include "shiftconv/expsum.hpp"
#include "shiftconv/sums.hpp"

namespace shiftconv {
namespace {

using i128 = __int128;

Rational mediant(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return Rational(a + c, b + d);
}

// Sign of num/den - r, exactly.
int compare(std::int64_t num, std::int64_t den, const Rational& r) {
  const i128 lhs = static_cast<i128>(num) * r.denominator();
  const i128 rhs = static_cast<i128>(r.numerator()) * den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

FareyDissection dirichlet_dissection(std::uint64_t Q) {
  if (Q == 0) throw PreconditionError("dirichlet_dissection: Q must be >= 1");
  const auto n = static_cast<std::int64_t>(Q);
  // Farey sequence of order Q on [0, 1] by the neighbour recurrence.
  std::vector<std::pair<std::int64_t, std::int64_t>> seq{{0, 1}};
  std::int64_t a = 0, b = 1, c = 1, d = n;
  while (c <= n) {
    seq.emplace_back(c, d);
    const std::int64_t k = (n + b) / d;
    const std::int64_t e = k * c - a;
    const std::int64_t f = k * d - b;
    a = c;
    b = d;
    c = e;
    d = f;
  }
  // seq ends with 1/1, the wrap of 0/1.
  FareyDissection out;
  out.Q = Q;
  const std::size_t m = seq.size() - 1;
  out.arcs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto [p, q] = seq[i];
    const auto [np, nq] = seq[i + 1];
    // Left neighbour of 0/1 is the last fraction shifted down by one period.
    const auto [lp, lq] = i == 0 ? std::pair{seq[m - 1].first - seq[m - 1].second, seq[m - 1].second}
                                 : seq[i - 1];
    out.arcs.push_back(FareyArc{p, q, mediant(lp, lq, p, q), mediant(p, q, np, nq)});
  }
  return out;
}

DissectionCheck check_dissection(const FareyDissection& d) {
  DissectionCheck check;
  check.total_length = Rational(0);
  if (d.arcs.empty()) return check;
  check.disjoint_and_covering = true;
  check.caps_hold = true;
  check.reduced = true;
  const auto Q = static_cast<std::int64_t>(d.Q);
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    const auto& arc = d.arcs[i];
    check.total_length += arc.length();
    if (!(arc.lo < arc.hi)) check.disjoint_and_covering = false;
    if (i + 1 < d.arcs.size() && arc.hi != d.arcs[i + 1].lo) check.disjoint_and_covering = false;
    if (arc.q < 1 || arc.q > Q || arc.a < 0 || arc.a >= arc.q || std::gcd(arc.a, arc.q) != 1) {
      check.reduced = false;
    }
    const Rational cap(1, arc.q * Q);
    const Rational c = arc.center();
    if (c - arc.lo > cap || arc.hi - c > cap || c < arc.lo || !(c < arc.hi)) {
      check.caps_hold = false;
    }
  }
  if (d.arcs.front().lo + Rational(1) != d.arcs.back().hi) check.disjoint_and_covering = false;
  return check;
}

std::size_t locate_arc(const FareyDissection& d, std::int64_t num, std::int64_t den) {
  const auto& first = d.arcs.front();
  if (compare(num, den, first.hi) < 0) return 0;
  if (compare(num, den, first.lo + Rational(1)) >= 0) return 0;
  // First arc whose hi exceeds num/den.
  std::size_t lo = 1, hi = d.arcs.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (compare(num, den, d.arcs[mid].hi) < 0) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

ArcDecomposition arc_decomposed_average(const CoefficientTable& f, const CoefficientTable& g,
                                        std::uint64_t X, std::uint64_t H, std::uint64_t Q,
                                        std::uint64_t G, const Executor& executor) {
  if (G < 8 * X || (G & (G - 1)) != 0) {
    throw GridTooSmallError("arc_decomposed_average: G must be a power of two >= 8X");
  }
  ShiftedSumSpec spec{X, H, f, g, std::nullopt};
  validate(spec);
  const FareyDissection dissection = dirichlet_dissection(Q);

  ArcDecomposition out;
  out.X = X;
  out.H = H;
  out.Q = Q;
  out.G = G;
  ExpSumGrid sf;
  ExpSumGrid sg;
  executor.for_each_index(2, [&](std::size_t i) {
    if (i == 0) {
      sf = exp_sum_grid(f, X, G);
    } else {
      sg = exp_sum_grid(g, X, G);
    }
  });

  std::vector<ComplexKahanSum> per_arc(dissection.arcs.size());
  KahanSum l1;
  double sup = 0.0;
  const auto den = static_cast<std::int64_t>(G);
  for (std::uint64_t j = 0; j < G; ++j) {
    const double alpha = static_cast<double>(j) / static_cast<double>(G);
    const Complex kernel = geometric_kernel(alpha, H);
    const Complex prod = sf.values[j] * std::conj(sg.values[j]);
    const std::size_t idx = locate_arc(dissection, static_cast<std::int64_t>(j), den);
    per_arc[idx].add(prod * kernel);
    l1.add(std::abs(sf.values[j]) * std::abs(sg.values[j]));
    if (idx != 0) sup = std::max(sup, std::abs(kernel));
  }

  const double inv_g = 1.0 / static_cast<double>(G);
  ComplexKahanSum minor;
  out.arcs.reserve(per_arc.size());
  for (std::size_t i = 0; i < per_arc.size(); ++i) {
    const Complex v = per_arc[i].value() * inv_g;
    out.arcs.push_back(ArcContribution{dissection.arcs[i].a, dissection.arcs[i].q, v, std::abs(v)});
    if (i != 0) minor.add(v);
  }
  out.major = out.arcs.front();
  out.minor_total = minor.value();
  out.total = out.major.value + out.minor_total;
  out.exact = averaged_shifted_sum(spec, executor).aggregate;
  out.relative_error = std::abs(out.total - out.exact) / std::max(std::abs(out.exact), 1.0);
  out.l1_integral = l1.value() * inv_g;
  out.minor_kernel_sup = sup;
  out.minor_bound = sup * out.l1_integral;
  out.kernel_mass = kernel_level_mass(H, dissection).mass;
  return out;
}

GallagherReport gallagher_compare(const CoefficientTable& f, std::uint64_t X, double theta,
                                  std::uint64_t G) {
  if (!(theta > 0.0 && theta < 0.5)) throw DomainError("gallagher_compare: theta must be in (0, 1/2)");
  if (X < 2) throw PreconditionError("gallagher_compare: X must be >= 2");
  const auto span = static_cast<std::uint64_t>(std::floor(1.0 / theta));
  if (f.n_max() < 2 * X) throw RangeError("gallagher_compare: table must reach 2X");
  if (G == 0) G = std::bit_ceil(8 * X);

  GallagherReport out;
  out.X = X;
  out.theta = theta;
  out.G = G;
  const ExpSumGrid grid = exp_sum_grid(f, X, G);
  KahanSum lhs;
  for (std::uint64_t j = 0; j < G; ++j) {
    const double alpha = static_cast<double>(j) / static_cast<double>(G);
    if (dist_to_int(alpha) < theta) lhs.add(std::norm(grid.values[j]));
  }
  out.lhs = lhs.value() / static_cast<double>(G);

  // The window sums see f only on the support [X, 2X] of S_f; x runs over
  // [X/2, 2X], which reaches every window meeting the support once 1/theta
  // <= X/2.
  const double* fv = f.data();
  const auto a = [&](std::uint64_t n) { return n >= X && n <= 2 * X ? fv[n] : 0.0; };
  const std::uint64_t x0 = (X + 1) / 2;
  DoubleDouble window;
  for (std::uint64_t n = x0; n <= x0 + span; ++n) window.add(a(n));
  KahanSum rhs;
  for (std::uint64_t x = x0;; ++x) {
    const double w = theta * window.value();
    rhs.add(w * w);
    if (x >= 2 * X) break;
    window.add(a(x + span + 1));
    window.add(-a(x));
  }
  out.rhs = rhs.value();
  if (out.rhs > 0.0) out.ratio = out.lhs / out.rhs;
  return out;
}

double VariancePoint::normalized() const {
  const double lm = std::log(static_cast<double>(M));
  return variance / (static_cast<double>(M) * Delta * lm * lm);
}

VariancePoint short_interval_variance(const CoefficientTable& lam, std::uint64_t M,
                                      double Delta, std::int64_t h, std::uint64_t k,
                                      bool max_mode, const Executor& executor) {
  if (M == 0) throw PreconditionError("short_interval_variance: M must be positive");
  if (k == 0) throw PreconditionError("short_interval_variance: k must be positive");
  if (!(Delta > 0.0)) throw PreconditionError("short_interval_variance: Delta must be positive");
  if (Delta * Delta > static_cast<double>(M)) {
    throw PreconditionError("short_interval_variance: Delta must be <= sqrt(M)");
  }
  const auto kk = static_cast<std::int64_t>(k);
  if (std::gcd(h, kk) != 1) throw PreconditionError("short_interval_variance: gcd(h, k) must be 1");
  const auto U = static_cast<std::uint64_t>(std::floor(Delta));
  if (lam.n_max() < 2 * M + U) {
    throw RangeError("short_interval_variance: table must reach 2M + Delta");
  }

  // e(n h / k) depends only on n mod k.
  const std::int64_t hr = ((h % kk) + kk) % kk;
  std::vector<Complex> roots(k);
  for (std::uint64_t r = 0; r < k; ++r) {
    roots[r] = unit_phase(static_cast<double>((r * static_cast<std::uint64_t>(hr)) % k) /
                          static_cast<double>(k));
  }
  const double* lv = lam.data();
  auto twisted = [&](std::uint64_t n) { return lv[n] * roots[n % k]; };

  const auto chunks = fixed_chunks(M, 2 * M + 1);
  std::vector<KahanSum> partial(chunks.size());
  executor.for_each_index(chunks.size(), [&](std::size_t c) {
    KahanSum acc;
    if (max_mode) {
      for (std::uint64_t x = chunks[c].begin; x < chunks[c].end; ++x) {
        Complex s;
        double best = 0.0;
        for (std::uint64_t u = 0; u <= U; ++u) {
          s += twisted(x + u);
          best = std::max(best, std::norm(s));
        }
        acc.add(best);
      }
    } else {
      DoubleDouble re;
      DoubleDouble im;
      const std::uint64_t x0 = chunks[c].begin;
      for (std::uint64_t n = x0; n <= x0 + U; ++n) {
        const Complex t = twisted(n);
        re.add(t.real());
        im.add(t.imag());
      }
      for (std::uint64_t x = x0;; ++x) {
        acc.add(std::norm(Complex(re.value(), im.value())));
        if (x + 1 >= chunks[c].end) break;
        const Complex in = twisted(x + U + 1);
        const Complex out = twisted(x);
        re.add(in.real());
        re.add(-out.real());
        im.add(in.imag());
        im.add(-out.imag());
      }
    }
    partial[c] = acc;
  });
  KahanSum total;
  for (const auto& p : partial) total.merge(p);

  VariancePoint point;
  point.M = M;
  point.Delta = Delta;
  point.h = h;
  point.k = k;
  point.variance = total.value();
  point.max_mode = max_mode;
  point.in_lemma_regime = static_cast<double>(k) <= std::pow(Delta, 0.25);
  return point;
}

}  // namespace shiftconv
