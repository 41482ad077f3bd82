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

#include "ntt.hpp"

#include <cassert>
#include <stdexcept>

namespace shiftconv::detail {
namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

MontgomeryField::MontgomeryField(std::uint32_t p) : p_(p) {
  if (p % 2 == 0 || p >= (1u << 31)) {
    throw std::invalid_argument("Montgomery modulus must be odd and < 2^31");
  }
  // Newton iteration for p^{-1} mod 2^32.
  std::uint32_t inv = p;
  for (int i = 0; i < 5; ++i) inv *= 2u - p * inv;
  neg_inv_ = ~inv + 1u;
  one_ = to_mont(1);
}

std::uint32_t MontgomeryField::pow(std::uint32_t base, std::uint64_t e) const noexcept {
  std::uint32_t r = one_;
  while (e != 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::uint32_t primitive_root(std::uint32_t p) {
  std::vector<std::uint64_t> factors;
  std::uint64_t m = p - 1;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto q : factors) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return static_cast<std::uint32_t>(g);
  }
  throw std::logic_error("no primitive root");
}

Ntt::Ntt(std::uint32_t p, std::size_t length) : field_(p), n_(length) {
  if (n_ < 2 || (n_ & (n_ - 1)) != 0 || (p - 1) % n_ != 0) {
    throw std::invalid_argument("NTT length must be a power of two dividing p - 1");
  }
  const std::uint32_t g = field_.to_mont(primitive_root(p));
  roots_.assign(n_, 0);
  inv_roots_.assign(n_, 0);
  for (std::size_t len = 1; len < n_; len <<= 1) {
    const std::uint32_t w = field_.pow(g, (p - 1) / (2 * len));
    const std::uint32_t wi = field_.pow(w, 2 * len - 1);
    std::uint32_t cur = field_.one();
    std::uint32_t cur_i = field_.one();
    for (std::size_t j = 0; j < len; ++j) {
      roots_[len + j] = cur;
      inv_roots_[len + j] = cur_i;
      cur = field_.mul(cur, w);
      cur_i = field_.mul(cur_i, wi);
    }
  }
  inv_n_ = field_.pow(field_.to_mont(static_cast<std::uint32_t>(n_ % p)), p - 2);
}

void Ntt::forward(std::span<std::uint32_t> a) const {
  assert(a.size() == n_);
  const auto& f = field_;
  for (std::size_t len = n_ >> 1; len >= 1; len >>= 1) {
    const std::uint32_t* w = roots_.data() + len;
    for (std::size_t i = 0; i < n_; i += 2 * len) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + len;
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint32_t u = lo[j];
        const std::uint32_t v = hi[j];
        lo[j] = f.add(u, v);
        hi[j] = f.mul(f.sub(u, v), w[j]);
      }
    }
  }
}

void Ntt::inverse(std::span<std::uint32_t> a) const {
  assert(a.size() == n_);
  const auto& f = field_;
  for (std::size_t len = 1; len < n_; len <<= 1) {
    const std::uint32_t* w = inv_roots_.data() + len;
    for (std::size_t i = 0; i < n_; i += 2 * len) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + len;
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint32_t u = lo[j];
        const std::uint32_t v = f.mul(hi[j], w[j]);
        lo[j] = f.add(u, v);
        hi[j] = f.sub(u, v);
      }
    }
  }
}

}  // namespace shiftconv::detail
