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

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "shiftconv/coefficients.hpp"

namespace shiftconv {
namespace {

using boost::multiprecision::cpp_int;

struct PrimePower {
  std::uint64_t p;
  std::uint32_t e;
  std::uint64_t value;
};

std::vector<std::uint32_t> smallest_prime_factors(std::size_t n_max) {
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::size_t i = 2; i <= n_max; ++i) {
    if (spf[i] != 0) continue;
    for (std::size_t j = i; j <= n_max; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

std::vector<PrimePower> factor(std::uint64_t n, const std::vector<std::uint32_t>& spf) {
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint64_t p = spf[n];
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  return out;
}

cpp_int big(const TauInt& x) { return static_cast<cpp_int>(x); }

bool multiplicative_ok(const ExactTauTable& t, std::uint64_t m, std::uint64_t n) {
  return big(t[m * n]) == big(t[m]) * big(t[n]);
}

bool prime_power_ok(const ExactTauTable& t, std::uint64_t p, std::uint32_t r) {
  // tau(p^{r+1}) = tau(p) tau(p^r) - p^11 tau(p^{r-1})
  std::uint64_t pr_minus = 1;
  for (std::uint32_t i = 1; i < r; ++i) pr_minus *= p;
  const std::uint64_t pr = pr_minus * p;
  const cpp_int p11 = boost::multiprecision::pow(cpp_int(p), 11);
  const cpp_int prev = pr_minus == 1 ? cpp_int(1) : big(t[pr_minus]);
  const cpp_int rhs = big(t[p]) * big(t[pr]) - p11 * prev;
  return big(t[pr * p]) == rhs;
}

// Number of relations an exhaustive pass would evaluate.
std::uint64_t count_relations(std::size_t n_max, const std::vector<std::uint32_t>& spf) {
  std::uint64_t total = 0;
  for (std::size_t n = 2; n <= n_max; ++n) {
    std::uint32_t omega = 0;
    std::uint64_t x = n;
    std::uint32_t e = 0;
    while (x > 1) {
      const std::uint64_t p = spf[x];
      ++omega;
      while (x % p == 0) {
        x /= p;
        ++e;
      }
    }
    if (omega == 1) {
      total += e >= 2 ? 1 : 0;
    } else {
      total += (std::uint64_t{1} << (omega - 1)) - 1;
    }
  }
  return total;
}

}  // namespace

HeckeReport verify_hecke(const ExactTauTable& tau, std::uint64_t trials,
                         const HeckeOptions& options) {
  HeckeReport report;
  const std::size_t n_max = tau.n_max();
  ++report.checks;
  if (tau[1] != 1) {
    report.passed = false;
    report.counterexample = HeckeCounterexample{HeckeCounterexample::Kind::kLeading, 1, 1};
    return report;
  }
  if (n_max < 2) return report;

  const auto spf = smallest_prime_factors(n_max);
  if (count_relations(n_max, spf) > options.exhaustive_budget) {
    report.exhaustive = false;
    // Prime-power recurrences are few (about sqrt(n_max)); check them all.
    for (std::uint64_t p = 2; p * p <= n_max; ++p) {
      if (spf[p] != p) continue;
      std::uint32_t r = 1;
      for (std::uint64_t pk = p * p; pk <= n_max; pk *= p, ++r) {
        ++report.checks;
        if (!prime_power_ok(tau, p, r)) {
          report.passed = false;
          report.counterexample = HeckeCounterexample{HeckeCounterexample::Kind::kPrimePower, p, r};
          return report;
        }
        if (pk > n_max / p) break;
      }
    }
    if (n_max < 6) return report;  // no coprime pair with both factors >= 2
    std::mt19937_64 rng(options.seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::uint64_t m = 0;
      std::uint64_t n = 0;
      do {
        m = 2 + rng() % std::max<std::uint64_t>(1, n_max / 2 - 1);
        const std::uint64_t n_hi = n_max / m;
        if (n_hi < 2) continue;
        n = 2 + rng() % (n_hi - 1);
      } while (n < 2 || m * n > n_max || std::gcd(m, n) != 1);
      if (m > n) std::swap(m, n);
      ++report.checks;
      if (!multiplicative_ok(tau, m, n)) {
        report.passed = false;
        report.counterexample =
            HeckeCounterexample{HeckeCounterexample::Kind::kMultiplicative, m, n};
        return report;
      }
    }
    return report;
  }

  std::vector<std::uint64_t> splits;
  for (std::uint64_t big_n = 2; big_n <= n_max; ++big_n) {
    const auto parts = factor(big_n, spf);
    if (parts.size() == 1) {
      if (parts[0].e >= 2) {
        ++report.checks;
        if (!prime_power_ok(tau, parts[0].p, parts[0].e - 1)) {
          report.passed = false;
          report.counterexample = HeckeCounterexample{HeckeCounterexample::Kind::kPrimePower,
                                                      parts[0].p, parts[0].e - 1};
          return report;
        }
      }
      continue;
    }
    splits.clear();
    const std::uint32_t subsets = 1u << parts.size();
    for (std::uint32_t mask = 1; mask + 1 < subsets; ++mask) {
      std::uint64_t m = 1;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (mask & (1u << i)) m *= parts[i].value;
      }
      if (m * m < big_n) splits.push_back(m);
    }
    std::sort(splits.begin(), splits.end());
    for (const auto m : splits) {
      ++report.checks;
      if (!multiplicative_ok(tau, m, big_n / m)) {
        report.passed = false;
        report.counterexample = HeckeCounterexample{HeckeCounterexample::Kind::kMultiplicative,
                                                    m, big_n / m};
        return report;
      }
    }
  }
  return report;
}

}  // namespace shiftconv
