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

#include "shiftconv/coefficients.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <utility>

#include "ntt.hpp"
#include "shiftconv/errors.hpp"

namespace shiftconv {
namespace {

using detail::kNttPrimes;
using detail::Ntt;
using boost::multiprecision::int256_t;

// log2 of the modulus product the CRT must exceed: |tau(n)| <= d(n) n^{11/2}
// and d(n) <= 2 sqrt(n) give |tau(n)| < 2 n^6; signed recovery doubles it,
// and 16 spare bits guard the estimate.
std::size_t crt_prime_count(std::size_t n_max) {
  const double need = 2.0 + 6.0 * std::log2(static_cast<double>(std::max<std::size_t>(n_max, 2))) + 16.0;
  double have = 0.0;
  std::size_t k = 0;
  while (have < need) {
    have += std::log2(static_cast<double>(kNttPrimes.at(k)));
    ++k;
  }
  return k;
}

std::size_t transform_length(std::size_t n) {
  return std::bit_ceil(std::max<std::size_t>(2 * n - 1, 2));
}

// Coefficients 0..n-1 of prod_{m>=1} (1 - q^m)^24 modulo p.
std::vector<std::uint32_t> eta24_mod(std::uint32_t p, std::size_t n) {
  const std::size_t len = transform_length(n);
  const Ntt ntt(p, len);
  const auto& f = ntt.field();
  const std::uint32_t one = f.one();
  const std::uint32_t minus_one = f.sub(0, one);

  // Euler's function from the pentagonal exponents k(3k-1)/2, k in Z.
  std::vector<std::uint32_t> e(len, 0);
  e[0] = one;
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t g1 = k * (3 * k - 1) / 2;
    if (g1 >= n) break;
    const std::uint32_t sign = (k % 2 == 1) ? minus_one : one;
    e[g1] = sign;
    const std::uint64_t g2 = k * (3 * k + 1) / 2;
    if (g2 < n) e[g2] = sign;
  }

  auto truncate = [&](std::vector<std::uint32_t>& a) {
    std::fill(a.begin() + static_cast<std::ptrdiff_t>(n), a.end(), 0u);
  };
  const std::uint32_t inv_len = ntt.inv_length();
  auto square = [&](std::vector<std::uint32_t>& a) {
    ntt.forward(a);
    for (auto& x : a) x = f.mul(f.mul(x, x), inv_len);
    ntt.inverse(a);
    truncate(a);
  };

  square(e);  // E^2
  square(e);  // E^4
  square(e);  // E^8
  // E^16 and E^24 = E^16 * E^8 share the spectrum of E^8.
  ntt.forward(e);
  std::vector<std::uint32_t> e16(len);
  std::transform(e.begin(), e.end(), e16.begin(),
                 [&](std::uint32_t x) { return f.mul(f.mul(x, x), inv_len); });
  ntt.inverse(e16);
  truncate(e16);
  ntt.forward(e16);
  for (std::size_t i = 0; i < len; ++i) e16[i] = f.mul(f.mul(e16[i], e[i]), inv_len);
  e = {};
  ntt.inverse(e16);
  e16.resize(n);
  for (auto& x : e16) x = f.from_mont(x);
  return e16;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  // m prime
  std::uint64_t r = 1;
  std::uint64_t e = m - 2;
  a %= m;
  while (e != 0) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

ExactTauTable::ExactTauTable(std::vector<TauInt> tau)
    : data_(std::make_shared<const std::vector<TauInt>>(std::move(tau))) {}

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::kGl2Lambda:
      return "gl2_lambda";
    case CoefficientKind::kGl3Sym2:
      return "gl3_sym2";
    case CoefficientKind::kUser:
      return "user";
  }
  return "user";
}

std::optional<CoefficientKind> parse_kind(std::string_view tag) {
  if (tag == "gl2_lambda") return CoefficientKind::kGl2Lambda;
  if (tag == "gl3_sym2") return CoefficientKind::kGl3Sym2;
  if (tag == "user") return CoefficientKind::kUser;
  return std::nullopt;
}

CoefficientTable::CoefficientTable(CoefficientKind kind, std::vector<double> values,
                                   int weight, std::string label)
    : kind_(kind), weight_(weight), label_(std::move(label)) {
  std::vector<double> shifted;
  shifted.reserve(values.size() + 1);
  shifted.push_back(0.0);
  shifted.insert(shifted.end(), values.begin(), values.end());
  data_ = std::make_shared<const std::vector<double>>(std::move(shifted));
}

CoefficientTable CoefficientTable::user(std::vector<double> values, std::string label) {
  return CoefficientTable(CoefficientKind::kUser, std::move(values), 0, std::move(label));
}

std::size_t estimate_tau_memory(std::size_t n_max) {
  const std::size_t primes = crt_prime_count(n_max);
  const std::size_t len = transform_length(n_max);
  // Two transform buffers while a prime is in flight, one residue vector per
  // prime afterwards, plus the output table.
  return primes * (2 * len + n_max) * sizeof(std::uint32_t) + n_max * sizeof(TauInt);
}

ExactTauTable compute_tau(std::size_t n_max, const TauOptions& options) {
  if (n_max == 0) throw PreconditionError("compute_tau: n_max must be >= 1");
  if (n_max > kMaxTauN) {
    throw ResourceLimitError("compute_tau: n_max " + std::to_string(n_max) +
                             " exceeds the engine limit " + std::to_string(kMaxTauN));
  }
  const std::size_t need = estimate_tau_memory(n_max);
  if (need > options.memory_budget_bytes) {
    throw ResourceLimitError("compute_tau: n_max " + std::to_string(n_max) + " needs ~" +
                             std::to_string(need >> 20) + " MiB, budget is " +
                             std::to_string(options.memory_budget_bytes >> 20) + " MiB");
  }

  const std::size_t k = crt_prime_count(n_max);
  std::vector<std::vector<std::uint32_t>> residues(k);
  options.executor.for_each_index(
      k, [&](std::size_t i) { residues[i] = eta24_mod(kNttPrimes[i], n_max); });

  // Garner mixed-radix reconstruction.
  std::vector<std::uint64_t> p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = kNttPrimes[i];
  // inv_prefix[i] = (p_0 ... p_{i-1})^{-1} mod p_i
  std::vector<std::uint64_t> inv_prefix(k, 1);
  for (std::size_t i = 1; i < k; ++i) {
    std::uint64_t prod = 1;
    for (std::size_t j = 0; j < i; ++j) prod = prod * (p[j] % p[i]) % p[i];
    inv_prefix[i] = inv_mod(prod, p[i]);
  }
  int256_t modulus = 1;
  for (std::size_t i = 0; i < k; ++i) modulus *= p[i];
  const int256_t half = modulus / 2;

  std::vector<TauInt> tau(n_max);
  const auto chunks = fixed_chunks(0, n_max);
  options.executor.for_each_index(chunks.size(), [&](std::size_t c) {
    std::vector<std::uint64_t> digit(k);
    for (std::size_t idx = chunks[c].begin; idx < chunks[c].end; ++idx) {
      for (std::size_t i = 0; i < k; ++i) {
        // x mod p_i from the digits found so far
        std::uint64_t acc = 0;
        std::uint64_t place = 1;
        for (std::size_t j = 0; j < i; ++j) {
          acc = (acc + digit[j] % p[i] * place) % p[i];
          place = place * (p[j] % p[i]) % p[i];
        }
        const std::uint64_t r = residues[i][idx];
        digit[i] = (r + p[i] - acc) % p[i] * inv_prefix[i] % p[i];
      }
      // Horner: x = d0 + p0 (d1 + p1 (d2 + ...))
      int256_t x = digit[k - 1];
      for (std::size_t i = k - 1; i-- > 0;) {
        x *= p[i];
        x += digit[i];
      }
      if (x > half) x -= modulus;
      tau[idx] = static_cast<TauInt>(x);
    }
  });
  return ExactTauTable(std::move(tau));
}

CoefficientTable normalize_gl2(const ExactTauTable& tau, int weight) {
  if (weight != 12) {
    throw UnsupportedWeightError("normalize_gl2: only weight 12 (Delta) is built in, got " +
                                 std::to_string(weight));
  }
  const double exponent = -(weight - 1) / 2.0;
  std::vector<double> values(tau.n_max());
  for (std::size_t n = 1; n <= tau.n_max(); ++n) {
    const double scale = std::exp(exponent * std::log(static_cast<double>(n)));
    values[n - 1] = tau[n].convert_to<double>() * scale;
  }
  return CoefficientTable(CoefficientKind::kGl2Lambda, std::move(values), weight,
                          "delta12 lambda n_max=" + std::to_string(tau.n_max()));
}

std::size_t sym2_capacity(const CoefficientTable& lam) {
  std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(lam.n_max())));
  while ((r + 1) * (r + 1) <= lam.n_max()) ++r;
  while (r * r > lam.n_max()) --r;
  return r;
}

CoefficientTable sym2_lift(const CoefficientTable& lam, std::size_t n_max) {
  if (lam.kind() != CoefficientKind::kGl2Lambda) {
    throw PreconditionError("sym2_lift: input must be a gl2_lambda table");
  }
  if (n_max == 0) throw PreconditionError("sym2_lift: n_max must be >= 1");
  if (n_max > sym2_capacity(lam)) {
    throw InsufficientInputError("sym2_lift: need lambda up to " + std::to_string(n_max) +
                                 "^2, table stops at " + std::to_string(lam.n_max()));
  }
  std::vector<double> values(n_max, 0.0);
  for (std::size_t d = 1; d * d <= n_max; ++d) {
    for (std::size_t m = 1; d * d * m <= n_max; ++m) {
      values[d * d * m - 1] += lam(m * m);
    }
  }
  return CoefficientTable(CoefficientKind::kGl3Sym2, std::move(values), lam.weight(),
                          "sym2 lift of " + lam.label() + " n_max=" + std::to_string(n_max));
}

std::vector<std::uint32_t> divisor_counts(std::size_t n_max) {
  std::vector<std::uint32_t> d(n_max + 1, 0);
  for (std::size_t i = 1; i <= n_max; ++i) {
    for (std::size_t j = i; j <= n_max; j += i) ++d[j];
  }
  return d;
}

std::optional<std::size_t> find_deligne_violation(const CoefficientTable& lam, double slack) {
  const auto d = divisor_counts(lam.n_max());
  for (std::size_t n = 1; n <= lam.n_max(); ++n) {
    if (!(std::abs(lam(n)) <= d[n] * (1.0 + slack))) return n;
  }
  return std::nullopt;
}

}  // namespace shiftconv
