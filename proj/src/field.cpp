// Copyright 2026 The tmodule-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tmlab/field.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace tmlab {

namespace {

using DensePoly = std::vector<std::uint32_t>;

void trim(DensePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo the monic g, over F_p.
DensePoly rem_monic(DensePoly f, const DensePoly& g, std::uint32_t p) {
  const std::size_t dg = g.size() - 1;
  trim(f);
  while (f.size() >= g.size()) {
    const std::uint64_t c = f.back();
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + (p - c) * g[i]) % p);
    }
    trim(f);
  }
  return f;
}

bool irreducible_over_prime(const DensePoly& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 0) return false;
  for (std::size_t k = 1; 2 * k <= n; ++k) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      DensePoly g(k + 1);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[k] = 1;
      if (rem_monic(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FqCtxPtr FqCtx::make(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  for (auto& c : modulus) c %= p;
  trim(modulus);
  if (modulus.size() < 2) throw FieldError("field modulus must have degree >= 1");
  if (modulus.back() != 1) throw FieldError("field modulus must be monic");
  if (!irreducible_over_prime(modulus, p)) throw FieldError("field modulus is reducible over F_p");
  std::uint64_t q = 1;
  for (std::size_t i = 1; i < modulus.size(); ++i) q *= p;
  if (q > (1u << 20)) throw FieldError("field too large for table arithmetic (q > 2^20)");
  return std::shared_ptr<const FqCtx>(new FqCtx(p, std::move(modulus)));
}

FqCtxPtr FqCtx::prime(std::uint32_t p) {
  static std::mutex mu;
  static std::map<std::uint32_t, FqCtxPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  auto ctx = make(p, {0, 1});
  cache.emplace(p, ctx);
  return ctx;
}

FqCtx::FqCtx(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), m_(static_cast<std::uint32_t>(modulus.size() - 1)), q_(1), modulus_(std::move(modulus)) {
  for (std::uint32_t i = 0; i < m_; ++i) q_ *= p_;

  if (p_ != 2 && q_ <= 256) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (Fq a = 0; a < q_; ++a)
      for (Fq b = 0; b < q_; ++b) add_table_[a * q_ + b] = add_digits(a, b);
  }

  // Find a generator of the multiplicative group by brute force.
  log_.assign(q_, 0);
  exp_.assign(q_, 0);
  if (q_ == 2) {
    exp_[0] = 1;
    log_[1] = 0;
    return;
  }
  for (Fq cand = 2; cand < q_; ++cand) {
    std::vector<Fq> powers;
    powers.reserve(q_ - 1);
    Fq x = 1;
    bool ok = true;
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      if (k > 0 && x == 1) {
        ok = false;
        break;
      }
      powers.push_back(x);
      x = mul_slow(x, cand);
    }
    if (!ok || x != 1) continue;
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      exp_[k] = powers[k];
      log_[powers[k]] = k;
    }
    return;
  }
  throw FieldError("no multiplicative generator found");
}

Fq FqCtx::add_digits(Fq a, Fq b) const {
  Fq r = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

Fq FqCtx::mul_slow(Fq a, Fq b) const {
  const auto da = digits(a), db = digits(b);
  DensePoly prod(2 * m_, 0);
  for (std::uint32_t i = 0; i < m_; ++i)
    for (std::uint32_t j = 0; j < m_; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
  auto r = rem_monic(prod, modulus_, p_);
  r.resize(m_, 0);
  return from_digits(r);
}

Fq FqCtx::neg(Fq a) const {
  if (p_ == 2 || a == 0) return a;
  Fq r = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return r;
}

Fq FqCtx::inv(Fq a) const {
  if (a == 0) throw FieldError("division by zero in F_q");
  const std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

Fq FqCtx::pow(Fq a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t l = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[l];
}

Fq FqCtx::frob(Fq a, std::uint64_t k) const {
  if (m_ == 1 || a == 0) return a;
  k %= m_;
  std::uint64_t e = 1;
  for (std::uint64_t i = 0; i < k; ++i) e *= p_;
  return pow(a, e);
}

Fq FqCtx::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Fq>(r);
}

std::vector<std::uint32_t> FqCtx::digits(Fq a) const {
  std::vector<std::uint32_t> d(m_);
  for (std::uint32_t i = 0; i < m_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

Fq FqCtx::from_digits(const std::vector<std::uint32_t>& d) const {
  Fq r = 0, scale = 1;
  for (std::size_t i = 0; i < d.size() && i < m_; ++i) {
    r += (d[i] % p_) * scale;
    scale *= p_;
  }
  return r;
}

std::string FqCtx::to_string(Fq a) const {
  if (m_ == 1) return std::to_string(a);
  std::ostringstream os;
  os << '(';
  const auto d = digits(a);
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ')';
  return os.str();
}

FqElem fq_arith(const FqElem& a, const FqElem& b, FqOp op) {
  if (!a.ctx()->same_field(*b.ctx())) throw FieldError("F_q context mismatch");
  const FqCtx& k = *a.ctx();
  switch (op) {
    case FqOp::add: return {a.ctx(), k.add(a.raw(), b.raw())};
    case FqOp::sub: return {a.ctx(), k.sub(a.raw(), b.raw())};
    case FqOp::mul: return {a.ctx(), k.mul(a.raw(), b.raw())};
    case FqOp::div: return {a.ctx(), k.div(a.raw(), b.raw())};
  }
  throw FieldError("unknown F_q operation");
}

FqElem operator+(const FqElem& a, const FqElem& b) { return fq_arith(a, b, FqOp::add); }
FqElem operator-(const FqElem& a, const FqElem& b) { return fq_arith(a, b, FqOp::sub); }
FqElem operator*(const FqElem& a, const FqElem& b) { return fq_arith(a, b, FqOp::mul); }
FqElem operator/(const FqElem& a, const FqElem& b) { return fq_arith(a, b, FqOp::div); }

}  // namespace tmlab
