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

#include "tmlab/ratfunc.hpp"

namespace tmlab {

RatFunc RatFunc::make(FqPoly num, FqPoly den) {
  if (den.is_zero()) throw FieldError("rational function with zero denominator");
  const FqCtxPtr ctx = num.ctx();
  if (num.is_zero()) return RatFunc(ctx);
  if (den.degree() > 0) {
    const FqPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = div_exact(num, g);
      den = div_exact(den, g);
    }
  }
  const Fq lead = den.lead();
  if (lead != 1) {
    const Fq inv = ctx->inv(lead);
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return RatFunc(std::move(num), std::move(den), 0);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, 0); }

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw FieldError("inverse of zero in K");
  return make(den_, num_);
}

RatFunc RatFunc::frobenius(std::uint64_t k) const {
  return RatFunc(num_.frobenius(k), den_.frobenius(k), 0);
}

RatFunc RatFunc::pow(std::uint64_t e) const {
  return RatFunc(num_.pow(e), den_.pow(e), 0);
}

RatFunc RatFunc::scaled(Fq c) const {
  if (c == 0) return RatFunc(ctx());
  return RatFunc(num_.scaled(c), den_, 0);
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ + b.num_);
  if (a.den_ == b.den_) return RatFunc::make(a.num_ + b.num_, a.den_);
  // With g = gcd(b1, b2) any common factor of the new numerator and
  // denominator divides g.
  const FqPoly g = poly_gcd(a.den_, b.den_);
  const FqPoly ad = div_exact(a.den_, g);
  const FqPoly bd = div_exact(b.den_, g);
  FqPoly num = a.num_ * bd + b.num_ * ad;
  FqPoly den = ad * b.den_;
  if (num.is_zero()) return RatFunc(a.ctx());
  if (g.degree() > 0) {
    const FqPoly h = poly_gcd(num, g);
    if (h.degree() > 0) {
      num = div_exact(num, h);
      den = div_exact(den, h);
    }
  }
  return RatFunc(std::move(num), std::move(den), 0);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc(a.ctx());
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_);
  FqPoly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  if (bd.degree() > 0) {
    const FqPoly g = poly_gcd(an, bd);
    if (g.degree() > 0) {
      an = div_exact(an, g);
      bd = div_exact(bd, g);
    }
  }
  if (ad.degree() > 0) {
    const FqPoly g = poly_gcd(bn, ad);
    if (g.degree() > 0) {
      bn = div_exact(bn, g);
      ad = div_exact(ad, g);
    }
  }
  return RatFunc(an * bn, ad * bd, 0);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  auto wrap = [](const FqPoly& f) {
    return f.term_count() > 1 ? "(" + f.to_string() + ")" : f.to_string();
  };
  return wrap(num_) + "/" + wrap(den_);
}

}  // namespace tmlab
