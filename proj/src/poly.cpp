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

#include "tmlab/poly.hpp"

#include <algorithm>
#include <sstream>

namespace tmlab {

namespace {

using Dense = std::vector<Fq>;

void trim(Dense& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::vector<Term> compress(const Dense& d, std::uint64_t offset = 0) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] != 0) out.push_back({offset + i, d[i]});
  }
  return out;
}

// Long division of dense polynomials; g must be nonzero with trimmed storage.
void dense_divmod(const FqCtx& k, Dense f, const Dense& g, Dense* quot, Dense* remainder) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const Fq inv_lead = k.inv(g.back());
  Dense q;
  if (f.size() >= g.size()) q.assign(f.size() - dg, 0);
  while (f.size() >= g.size()) {
    const Fq c = k.mul(f.back(), inv_lead);
    const std::size_t shift = f.size() - 1 - dg;
    q[shift] = c;
    const Fq nc = k.neg(c);
    for (std::size_t i = 0; i <= dg; ++i) {
      if (g[i] != 0) f[shift + i] = k.add(f[shift + i], k.mul(nc, g[i]));
    }
    trim(f);
  }
  if (quot) *quot = std::move(q);
  if (remainder) *remainder = std::move(f);
}

Dense dense_gcd(const FqCtx& k, Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r;
    dense_divmod(k, std::move(a), b, nullptr, &r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

FqPoly FqPoly::constant(const FqCtxPtr& ctx, Fq c) { return monomial(ctx, c, 0); }

FqPoly FqPoly::monomial(const FqCtxPtr& ctx, Fq c, std::uint64_t exp) {
  FqPoly r(ctx);
  if (c != 0) r.terms_.push_back({exp, c});
  return r;
}

FqPoly FqPoly::from_terms(const FqCtxPtr& ctx, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
  FqPoly r(ctx);
  for (const Term& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().exp == t.exp) {
      r.terms_.back().coeff = ctx->add(r.terms_.back().coeff, t.coeff);
      if (r.terms_.back().coeff == 0) r.terms_.pop_back();
    } else if (t.coeff != 0) {
      r.terms_.push_back(t);
    }
  }
  return r;
}

FqPoly FqPoly::from_dense(const FqCtxPtr& ctx, const std::vector<Fq>& coeffs) {
  FqPoly r(ctx);
  r.terms_ = compress(coeffs);
  return r;
}

Fq FqPoly::coeff(std::uint64_t exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                             [](const Term& t, std::uint64_t e) { return t.exp < e; });
  return (it != terms_.end() && it->exp == exp) ? it->coeff : 0;
}

std::vector<Fq> FqPoly::dense() const {
  Dense d(terms_.empty() ? 0 : terms_.back().exp + 1, 0);
  for (const Term& t : terms_) d[t.exp] = t.coeff;
  return d;
}

FqPoly FqPoly::operator-() const {
  FqPoly r(ctx_);
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.push_back({t.exp, ctx_->neg(t.coeff)});
  return r;
}

FqPoly FqPoly::scaled(Fq c) const {
  FqPoly r(ctx_);
  if (c == 0) return r;
  if (c == 1) return *this;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.push_back({t.exp, ctx_->mul(t.coeff, c)});
  return r;
}

FqPoly FqPoly::shifted(std::uint64_t k) const {
  FqPoly r = *this;
  for (Term& t : r.terms_) t.exp += k;
  return r;
}

FqPoly FqPoly::frobenius(std::uint64_t k) const {
  if (k == 0) return *this;
  std::uint64_t factor = 1;
  for (std::uint64_t i = 0; i < k; ++i) factor *= ctx_->p();
  FqPoly r(ctx_);
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.push_back({t.exp * factor, ctx_->frob(t.coeff, k)});
  return r;
}

FqPoly FqPoly::monic() const {
  if (terms_.empty() || lead() == 1) return *this;
  return scaled(ctx_->inv(lead()));
}

FqPoly FqPoly::derivative() const {
  FqPoly r(ctx_);
  for (const Term& t : terms_) {
    if (t.exp == 0) continue;
    const Fq c = ctx_->mul(t.coeff, ctx_->from_int(static_cast<std::int64_t>(t.exp % ctx_->p())));
    if (c != 0) r.terms_.push_back({t.exp - 1, c});
  }
  return r;
}

FqPoly FqPoly::pow(std::uint64_t e) const {
  FqPoly result = constant(ctx_, 1);
  FqPoly base = *this;
  // Peel off p-th powers through Frobenius, which is much cheaper than
  // squaring.
  std::uint64_t frob_level = 0;
  while (e) {
    const std::uint64_t digit = e % ctx_->p();
    if (digit) {
      FqPoly b = base.frobenius(frob_level);
      for (std::uint64_t i = 0; i < digit; ++i) result *= b;
    }
    e /= ctx_->p();
    ++frob_level;
  }
  return result;
}

FqPoly operator+(const FqPoly& a, const FqPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const FqCtx& k = *a.ctx_;
  FqPoly r(a.ctx_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin(), j = b.terms_.begin();
  while (i != a.terms_.end() && j != b.terms_.end()) {
    if (i->exp < j->exp) {
      r.terms_.push_back(*i++);
    } else if (j->exp < i->exp) {
      r.terms_.push_back(*j++);
    } else {
      const Fq c = k.add(i->coeff, j->coeff);
      if (c != 0) r.terms_.push_back({i->exp, c});
      ++i;
      ++j;
    }
  }
  r.terms_.insert(r.terms_.end(), i, a.terms_.end());
  r.terms_.insert(r.terms_.end(), j, b.terms_.end());
  return r;
}

FqPoly operator-(const FqPoly& a, const FqPoly& b) { return a + (-b); }

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
  FqPoly r(a.ctx_);
  if (a.is_zero() || b.is_zero()) return r;
  const FqPoly& small = a.terms_.size() <= b.terms_.size() ? a : b;
  const FqPoly& big = a.terms_.size() <= b.terms_.size() ? b : a;
  if (small.terms_.size() == 1) {
    r = big.scaled(small.terms_[0].coeff);
    return r.shifted(small.terms_[0].exp);
  }
  const FqCtx& k = *a.ctx_;
  const std::uint64_t lo = small.low_degree() + big.low_degree();
  const std::uint64_t span = static_cast<std::uint64_t>(small.degree() + big.degree()) - lo + 1;
  const std::uint64_t products = small.terms_.size() * big.terms_.size();
  if (span <= 16 * products + 64) {
    Dense acc(span, 0);
    for (const Term& s : small.terms_) {
      const std::uint64_t base = s.exp - small.low_degree();
      for (const Term& t : big.terms_) {
        Fq& slot = acc[base + t.exp - big.low_degree()];
        slot = k.add(slot, k.mul(s.coeff, t.coeff));
      }
    }
    r.terms_ = compress(acc, lo);
    return r;
  }
  std::vector<Term> all;
  all.reserve(products);
  for (const Term& s : small.terms_)
    for (const Term& t : big.terms_) all.push_back({s.exp + t.exp, k.mul(s.coeff, t.coeff)});
  return FqPoly::from_terms(a.ctx_, std::move(all));
}

bool operator<(const FqPoly& a, const FqPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  auto i = a.terms_.rbegin(), j = b.terms_.rbegin();
  for (; i != a.terms_.rend() && j != b.terms_.rend(); ++i, ++j) {
    if (i->exp != j->exp) return i->exp < j->exp;
    if (i->coeff != j->coeff) return i->coeff < j->coeff;
  }
  return i == a.terms_.rend() && j != b.terms_.rend();
}

std::string FqPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const bool unit = it->coeff == 1;
    if (it->exp == 0) {
      os << ctx_->to_string(it->coeff);
      continue;
    }
    if (!unit) os << ctx_->to_string(it->coeff) << "*";
    os << "T";
    if (it->exp > 1) os << "^" << it->exp;
  }
  return os.str();
}

std::pair<FqPoly, FqPoly> divmod(const FqPoly& f, const FqPoly& g) {
  if (g.is_zero()) throw FieldError("polynomial division by zero");
  const FqCtxPtr& ctx = f.ctx();
  if (f.degree() < g.degree()) return {FqPoly(ctx), f};
  if (g.is_monomial()) {
    // Division by c*T^k splits the terms.
    const Fq inv = ctx->inv(g.lead());
    const std::uint64_t k = g.terms()[0].exp;
    std::vector<Term> q, r;
    for (const Term& t : f.terms()) {
      if (t.exp >= k) {
        q.push_back({t.exp - k, ctx->mul(t.coeff, inv)});
      } else {
        r.push_back(t);
      }
    }
    return {FqPoly::from_terms(ctx, std::move(q)), FqPoly::from_terms(ctx, std::move(r))};
  }
  Dense qd, rd;
  dense_divmod(*ctx, f.dense(), g.dense(), &qd, &rd);
  return {FqPoly::from_dense(ctx, qd), FqPoly::from_dense(ctx, rd)};
}

FqPoly rem(const FqPoly& f, const FqPoly& g) { return divmod(f, g).second; }

FqPoly div_exact(const FqPoly& f, const FqPoly& g) {
  auto [q, r] = divmod(f, g);
  if (!r.is_zero()) throw FieldError("inexact polynomial division");
  return q;
}

bool divides(const FqPoly& g, const FqPoly& f) { return rem(f, g).is_zero(); }

FqPoly poly_gcd(const FqPoly& f, const FqPoly& g) {
  const FqCtxPtr& ctx = f.ctx();
  if (f.is_zero() && g.is_zero()) throw FieldError("gcd(0, 0) is undefined");
  if (f.is_zero()) return g.monic();
  if (g.is_zero()) return f.monic();
  if (f.degree() == 0 || g.degree() == 0) return FqPoly::constant(ctx, 1);
  if (f.is_monomial() || g.is_monomial()) {
    const FqPoly& mono = f.is_monomial() ? f : g;
    const FqPoly& other = f.is_monomial() ? g : f;
    return FqPoly::monomial(ctx, 1, std::min(mono.low_degree(), other.low_degree()));
  }
  // Strip common and one-sided powers of T before the dense Euclid.
  const std::uint64_t tf = f.low_degree(), tg = g.low_degree();
  const FqPoly fs = divmod(f, FqPoly::monomial(ctx, 1, tf)).first;
  const FqPoly gs = divmod(g, FqPoly::monomial(ctx, 1, tg)).first;
  Dense d = dense_gcd(*ctx, fs.dense(), gs.dense());
  return FqPoly::from_dense(ctx, d).monic().shifted(std::min(tf, tg));
}

FqPoly poly_lcm(const FqPoly& f, const FqPoly& g) {
  if (f.is_zero() || g.is_zero()) throw FieldError("lcm with zero is undefined");
  if (f.degree() == 0) return g.monic();
  if (g.degree() == 0) return f.monic();
  if (f == g) return f.monic();
  return (div_exact(f, poly_gcd(f, g)) * g).monic();
}

FqPoly inverse_mod(const FqPoly& a, const FqPoly& m) {
  const FqCtxPtr& ctx = a.ctx();
  FqPoly r0 = m, r1 = rem(a, m);
  FqPoly s0(ctx), s1 = FqPoly::constant(ctx, 1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    FqPoly s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.degree() != 0) throw FieldError("element is not invertible modulo the place");
  return rem(s0.scaled(ctx->inv(r0.lead())), m);
}

}  // namespace tmlab
