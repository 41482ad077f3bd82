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

// Arithmetic coefficient sequences: exact Ramanujan tau, normalized Hecke
// eigenvalues of the weight-12 form Delta, the symmetric-square lift of
// Delta, and externally supplied tables.

#ifndef SHIFTCONV_COEFFICIENTS_HPP_
#define SHIFTCONV_COEFFICIENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "shiftconv/parallel.hpp"

namespace shiftconv {

/// Storage type for tau(n). |tau(n)| < 2 n^6 stays far inside 255 bits for
/// every n the engine accepts; arithmetic overflow throws.
using TauInt = boost::multiprecision::checked_int256_t;

/// Largest n_max compute_tau accepts. Bounded by the 2-adic order of the NTT
/// primes (transform length 2^25).
inline constexpr std::size_t kMaxTauN = std::size_t{1} << 24;

/// Exact tau(1..n_max), immutable and cheap to copy.
class ExactTauTable {
 public:
  /// `tau` holds tau(1), tau(2), ... in order.
  explicit ExactTauTable(std::vector<TauInt> tau);

  std::size_t n_max() const noexcept { return data_->size(); }
  /// 1-based access.
  const TauInt& operator[](std::size_t n) const { return (*data_)[n - 1]; }
  std::span<const TauInt> values() const noexcept { return *data_; }

  friend bool operator==(const ExactTauTable& a, const ExactTauTable& b) {
    return *a.data_ == *b.data_;
  }

 private:
  std::shared_ptr<const std::vector<TauInt>> data_;
};

enum class CoefficientKind { kGl2Lambda, kGl3Sym2, kUser };

std::string_view to_string(CoefficientKind kind);
/// Accepts "gl2_lambda", "gl3_sym2", "user".
std::optional<CoefficientKind> parse_kind(std::string_view tag);

/// Real sequence f(1..n_max) with provenance. Copies share storage.
class CoefficientTable {
 public:
  CoefficientTable(CoefficientKind kind, std::vector<double> values, int weight,
                   std::string label);

  /// Convenience for test inputs and loaded files.
  static CoefficientTable user(std::vector<double> values, std::string label = "");

  std::size_t n_max() const noexcept { return data_->size() - 1; }
  CoefficientKind kind() const noexcept { return kind_; }
  int weight() const noexcept { return weight_; }
  const std::string& label() const noexcept { return label_; }

  /// f(n) for 1 <= n <= n_max.
  double operator()(std::size_t n) const { return (*data_)[n]; }
  /// Pointer such that data()[n] == f(n); data()[0] is 0.
  const double* data() const noexcept { return data_->data(); }
  /// f(1), ..., f(n_max).
  std::span<const double> values() const noexcept {
    return std::span<const double>(*data_).subspan(1);
  }

 private:
  CoefficientKind kind_;
  int weight_;
  std::string label_;
  std::shared_ptr<const std::vector<double>> data_;
};

/// Membership statistics for the F-class window/second-moment conditions.
struct FClassStats {
  std::uint64_t X = 0;
  double A = 0.0;
  double variance_integral = 0.0;
  double second_moment = 0.0;
};

struct TauOptions {
  /// Peak working memory allowed for the NTT buffers plus the output table.
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
  Executor executor{1};
};

/// Rough peak memory of compute_tau(n_max), in bytes.
std::size_t estimate_tau_memory(std::size_t n_max);

/// tau(n) for n <= n_max: coefficients of q * prod_{m>=1} (1 - q^m)^24.
/// Euler's product is expanded sparsely from the pentagonal exponents, then
/// raised to the 24th power as E^16 * E^8 by repeated squaring. Products are
/// carried out modulo several NTT primes and recombined by CRT, so the result
/// is exact and independent of the thread count.
/// Throws ResourceLimitError above kMaxTauN or the memory budget.
ExactTauTable compute_tau(std::size_t n_max, const TauOptions& options = {});

/// lambda(n) = tau(n) n^{-11/2}. Only weight 12 is built in; anything else
/// throws UnsupportedWeightError.
CoefficientTable normalize_gl2(const ExactTauTable& tau, int weight = 12);

/// Symmetric-square lift: Lambda(n,1) = sum_{d^2 m = n} lambda(m^2).
/// Needs lam.n_max() >= n_max^2 (InsufficientInputError otherwise).
CoefficientTable sym2_lift(const CoefficientTable& lam, std::size_t n_max);

/// Largest n for which sym2_lift(lam, n) is admissible.
std::size_t sym2_capacity(const CoefficientTable& lam);

/// Number of divisors d(n) for n = 0..n_max (entry 0 is 0).
std::vector<std::uint32_t> divisor_counts(std::size_t n_max);

/// First n with |f(n)| > d(n) (Deligne), or nullopt. `slack` is a relative
/// tolerance for the float comparison.
std::optional<std::size_t> find_deligne_violation(const CoefficientTable& lam,
                                                  double slack = 1e-12);

// Hecke relation checks ----------------------------------------------------

struct HeckeCounterexample {
  enum class Kind { kLeading, kMultiplicative, kPrimePower };
  Kind kind;
  /// kMultiplicative: (m, n) with m < n. kPrimePower: (p, r) for the
  /// recursion producing tau(p^{r+1}). kLeading: (1, 1).
  std::uint64_t first;
  std::uint64_t second;
};

struct HeckeReport {
  bool passed = true;
  bool exhaustive = true;
  std::uint64_t checks = 0;
  std::optional<HeckeCounterexample> counterexample;
};

struct HeckeOptions {
  /// Exhaustive checking is used while the number of relations is at most
  /// this; otherwise `trials` seeded random coprime pairs are tested.
  std::uint64_t exhaustive_budget = 20'000'000;
  std::uint64_t seed = 0;
};

/// Checks tau(1) = 1, tau(mn) = tau(m) tau(n) for coprime m, n, and
/// tau(p^{r+1}) = tau(p) tau(p^r) - p^11 tau(p^{r-1}). Failures are data.
/// Relations are visited in increasing order of the largest index involved,
/// so the reported counterexample is the first one in that order.
HeckeReport verify_hecke(const ExactTauTable& tau, std::uint64_t trials,
                         const HeckeOptions& options = {});

// Files ----------------------------------------------------------------------

/// Reads `n<TAB>value` rows (contiguous from n = 1) with an optional header
/// `# kind=<tag> n_max=<N> label=<string>`. Result kind is always user.
/// Throws ParseError (with line number) or NonContiguousIndexError.
CoefficientTable load_user_coefficients(const std::filesystem::path& path);

/// Writes `table` in the same format, values printed round-trip exact.
void save_coefficients(const CoefficientTable& table,
                       const std::filesystem::path& path);

/// Exact tau table in the coefficient file format with decimal integers.
void save_tau_table(const ExactTauTable& tau, const std::filesystem::path& path);
ExactTauTable load_tau_table(const std::filesystem::path& path);

/// On-disk cache of exact tau tables keyed by n_max. The format version is
/// part of the file name, so bumping it invalidates older caches.
class TauCache {
 public:
  static constexpr int kFormatVersion = 1;

  explicit TauCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(std::size_t n_max) const;

  /// Smallest cached table with n_max >= min_n, truncated to min_n.
  std::optional<ExactTauTable> find(std::size_t min_n) const;
  /// Computes and stores the table when no suitable cache exists.
  ExactTauTable load_or_compute(std::size_t n_max, const TauOptions& options = {});
  void store(const ExactTauTable& tau) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace shiftconv

#endif  // SHIFTCONV_COEFFICIENTS_HPP_
