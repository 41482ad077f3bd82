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

// Number-theoretic transform over word-size primes with Montgomery
// arithmetic. Internal to the coefficient engine.

#ifndef SHIFTCONV_SRC_NTT_HPP_
#define SHIFTCONV_SRC_NTT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shiftconv::detail {

/// Primes p < 2^31 with 2^25 | p - 1, largest transform length first.
inline constexpr std::array<std::uint32_t, 7> kNttPrimes = {
    2013265921u,  // 15 * 2^27 + 1
    1811939329u,  // 27 * 2^26 + 1
    469762049u,   //  7 * 2^26 + 1
    2113929217u,  // 63 * 2^25 + 1
    1711276033u,  // 51 * 2^25 + 1
    1107296257u,  // 33 * 2^25 + 1
    167772161u,   //  5 * 2^25 + 1
};

inline constexpr int kNttMaxLog2 = 25;

class MontgomeryField {
 public:
  explicit MontgomeryField(std::uint32_t p);

  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t to_mont(std::uint32_t x) const noexcept {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) << 32) % p_);
  }
  std::uint32_t from_mont(std::uint32_t x) const noexcept { return reduce(x); }

  std::uint32_t reduce(std::uint64_t t) const noexcept {
    const std::uint32_t m = static_cast<std::uint32_t>(t) * neg_inv_;
    const std::uint64_t u = (t + static_cast<std::uint64_t>(m) * p_) >> 32;
    return static_cast<std::uint32_t>(u >= p_ ? u - p_ : u);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return reduce(static_cast<std::uint64_t>(a) * b);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    const std::uint32_t s = a + b;  // a, b < p < 2^31
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  /// Montgomery-form power.
  std::uint32_t pow(std::uint32_t base, std::uint64_t e) const noexcept;
  std::uint32_t one() const noexcept { return one_; }

 private:
  std::uint32_t p_;
  std::uint32_t neg_inv_;
  std::uint32_t one_;
};

/// Transforms of one fixed power-of-two length modulo one prime. Values are
/// kept in Montgomery form throughout. forward() leaves the spectrum in
/// bit-reversed order and inverse() expects it, which is all pointwise
/// products need.
class Ntt {
 public:
  Ntt(std::uint32_t p, std::size_t length);

  const MontgomeryField& field() const noexcept { return field_; }
  std::size_t length() const noexcept { return n_; }

  void forward(std::span<std::uint32_t> a) const;
  /// Omits the 1/n factor; callers fold inv_length() into a pointwise step.
  void inverse(std::span<std::uint32_t> a) const;
  /// 1/n in Montgomery form.
  std::uint32_t inv_length() const noexcept { return inv_n_; }

 private:
  MontgomeryField field_;
  std::size_t n_;
  std::vector<std::uint32_t> roots_;      // roots_[len + j] = w_{2len}^j
  std::vector<std::uint32_t> inv_roots_;
  std::uint32_t inv_n_;
};

std::uint32_t primitive_root(std::uint32_t p);

}  // namespace shiftconv::detail

#endif  // SHIFTCONV_SRC_NTT_HPP_
