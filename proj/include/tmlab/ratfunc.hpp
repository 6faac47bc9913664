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

#pragma once

#include <cstdint>
#include <string>

#include "tmlab/poly.hpp"

namespace tmlab {

/// An element of K = F_q(T) in canonical form: gcd(num, den) = 1, den monic.
/// Zero is 0/1, so equal elements compare equal term by term.
class RatFunc {
 public:
  explicit RatFunc(const FqCtxPtr& ctx) : num_(ctx), den_(FqPoly::constant(ctx, 1)) {}
  explicit RatFunc(FqPoly num) : num_(std::move(num)), den_(FqPoly::constant(num_.ctx(), 1)) {}
  /// Reduces num/den; throws FieldError when den is zero.
  static RatFunc make(FqPoly num, FqPoly den);

  static RatFunc constant(const FqCtxPtr& ctx, Fq c) { return RatFunc(FqPoly::constant(ctx, c)); }
  static RatFunc from_int(const FqCtxPtr& ctx, std::int64_t v) { return constant(ctx, ctx->from_int(v)); }
  static RatFunc T(const FqCtxPtr& ctx) { return RatFunc(FqPoly::T(ctx)); }

  const FqPoly& num() const { return num_; }
  const FqPoly& den() const { return den_; }
  const FqCtxPtr& ctx() const { return num_.ctx(); }
  const FqCtx& field() const { return *num_.ctx(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return den_.is_one() && num_.is_constant(); }

  RatFunc operator-() const;
  RatFunc inverse() const;
  /// a^(p^k); stays reduced without a gcd.
  RatFunc frobenius(std::uint64_t k) const;
  RatFunc pow(std::uint64_t e) const;
  RatFunc scaled(Fq c) const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& b) { return *this = *this + b; }
  RatFunc& operator-=(const RatFunc& b) { return *this = *this - b; }
  RatFunc& operator*=(const RatFunc& b) { return *this = *this * b; }

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    if (!(a.den_ == b.den_)) return a.den_ < b.den_;
    return a.num_ < b.num_;
  }

  std::string to_string() const;

 private:
  RatFunc(FqPoly num, FqPoly den, int /*already reduced*/) : num_(std::move(num)), den_(std::move(den)) {}

  FqPoly num_;
  FqPoly den_;
};

/// Frobenius a^(p^k) as a free function.
inline RatFunc frobenius(const RatFunc& a, std::uint64_t k) { return a.frobenius(k); }

}  // namespace tmlab
