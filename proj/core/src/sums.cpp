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

#include "shiftconv/sums.hpp"

#include <cmath>
#include <string>

#include "shiftconv/errors.hpp"

namespace shiftconv {
namespace {

void require_covers(const CoefficientTable& t, std::uint64_t n, const char* what) {
  if (t.n_max() < n) {
    throw RangeError(std::string(what) + ": table '" + t.label() + "' has n_max " +
                     std::to_string(t.n_max()) + " < " + std::to_string(n));
  }
}

}  // namespace

void validate(const ShiftedSumSpec& spec) {
  if (spec.X == 0) throw PreconditionError("X must be positive");
  if (spec.H == 0) throw PreconditionError("H must be positive");
  if (spec.H >= spec.X) {
    throw PreconditionError("H = " + std::to_string(spec.H) + " must be < X = " +
                            std::to_string(spec.X));
  }
  require_covers(spec.f, 2 * spec.X, "shifted sum");
  require_covers(spec.g, 2 * spec.X, "shifted sum");
  if (spec.weight) require_covers(*spec.weight, spec.H, "shift weight");
}

PartialSumTable::PartialSumTable(const CoefficientTable& g) {
  cumulative_.resize(g.n_max() + 1);
  DoubleDouble acc;
  for (std::size_t n = 1; n <= g.n_max(); ++n) {
    acc.add(g(n));
    cumulative_[n] = acc;
  }
}

Complex shifted_sum(const CoefficientTable& f, const CoefficientTable& g, std::uint64_t X,
                    std::uint64_t h) {
  require_covers(f, 2 * X, "shifted_sum");
  require_covers(g, 2 * X, "shifted_sum");
  if (h > X) throw PreconditionError("shifted_sum: h must be <= X");
  const double* fv = f.data();
  const double* gv = g.data();
  KahanSum acc;
  for (std::uint64_t n = X; n + h <= 2 * X; ++n) acc.add(fv[n] * gv[n + h]);
  return {acc.value(), 0.0};
}

ShiftedSumResult averaged_shifted_sum(const ShiftedSumSpec& spec, const Executor& executor) {
  validate(spec);
  ShiftedSumResult out;
  out.per_h.resize(spec.H);
  executor.for_each_index(spec.H, [&](std::size_t i) {
    out.per_h[i] = shifted_sum(spec.f, spec.g, spec.X, i + 1);
  });
  ComplexKahanSum acc;
  for (std::size_t i = 0; i < spec.H; ++i) {
    const double w = spec.weight ? (*spec.weight)(i + 1) : 1.0;
    acc.add(w * out.per_h[i]);
  }
  out.aggregate = acc.value();
  out.abs_aggregate = std::abs(out.aggregate);
  return out;
}

Complex reordered_average(const CoefficientTable& f, const PartialSumTable& g_partial,
                          std::uint64_t X, std::uint64_t H, const Executor& executor) {
  require_covers(f, 2 * X, "reordered_average");
  if (g_partial.n_max() < 2 * X) {
    throw RangeError("reordered_average: partial sums stop at " +
                     std::to_string(g_partial.n_max()) + " < 2X");
  }
  if (H > X) throw PreconditionError("reordered_average: H must be <= X");
  if (H == 0) return {0.0, 0.0};
  const double* fv = f.data();
  const auto chunks = fixed_chunks(X, 2 * X);
  std::vector<KahanSum> partial(chunks.size());
  executor.for_each_index(chunks.size(), [&](std::size_t c) {
    KahanSum acc;
    for (std::size_t n = chunks[c].begin; n < chunks[c].end; ++n) {
      const std::size_t top = std::min<std::size_t>(n + H, 2 * X);
      acc.add(fv[n] * g_partial.window(n, top));
    }
    partial[c] = acc;
  });
  KahanSum total;
  for (const auto& p : partial) total.merge(p);
  return {total.value(), 0.0};
}

Complex reordered_average(const CoefficientTable& f, const CoefficientTable& g,
                          std::uint64_t X, std::uint64_t H, const Executor& executor) {
  return reordered_average(f, PartialSumTable(g), X, H, executor);
}

double second_moment(const CoefficientTable& f, std::uint64_t X) {
  require_covers(f, 2 * X, "second_moment");
  const double* fv = f.data();
  KahanSum acc;
  for (std::uint64_t n = X; n <= 2 * X; ++n) acc.add(fv[n] * fv[n]);
  return acc.value();
}

FClassStats fclass_stats(const CoefficientTable& f, std::uint64_t X, double A,
                         const Executor& executor) {
  if (!(A >= 1.0)) throw PreconditionError("fclass_stats: A must be >= 1");
  const auto a = static_cast<std::uint64_t>(std::floor(A));
  if (X <= a) throw PreconditionError("fclass_stats: X must exceed A");
  if (static_cast<double>(2 * X) + A > static_cast<double>(f.n_max())) {
    throw RangeError("fclass_stats: need 2X + A <= n_max");
  }
  const double* fv = f.data();
  // Each fixed chunk seeds its window directly, then slides.
  const auto chunks = fixed_chunks(X, 2 * X);
  std::vector<KahanSum> partial(chunks.size());
  executor.for_each_index(chunks.size(), [&](std::size_t c) {
    const std::uint64_t x0 = chunks[c].begin;
    DoubleDouble window;
    for (std::uint64_t n = x0 - a; n <= x0 + a; ++n) window.add(fv[n]);
    KahanSum acc;
    for (std::uint64_t x = x0;; ++x) {
      const double w = window.value();
      acc.add(w * w);
      if (x + 1 >= chunks[c].end) break;
      window.add(fv[x + a + 1]);
      window.add(-fv[x - a]);
    }
    partial[c] = acc;
  });
  KahanSum total;
  for (const auto& p : partial) total.merge(p);

  FClassStats stats;
  stats.X = X;
  stats.A = A;
  stats.variance_integral = total.value();
  stats.second_moment = second_moment(f, X);
  return stats;
}

}  // namespace shiftconv
