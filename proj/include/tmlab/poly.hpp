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
#include <utility>
#include <vector>

#include "tmlab/field.hpp"

namespace tmlab {

struct Term {
  std::uint64_t exp;
  Fq coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Univariate polynomial over F_q in the variable T.
///
/// Stored sparsely as terms sorted by increasing exponent with no zero
/// coefficients. Frobenius twists multiply every exponent by p, so orbit
/// coordinates reach degrees far beyond their term counts; nothing here
/// allocates proportionally to the degree except division and gcd, which
/// are only used to keep rational functions reduced.
class FqPoly {
 public:
  explicit FqPoly(FqCtxPtr ctx) : ctx_(std::move(ctx)) {}

  static FqPoly constant(const FqCtxPtr& ctx, Fq c);
  static FqPoly monomial(const FqCtxPtr& ctx, Fq c, std::uint64_t exp);
  static FqPoly T(const FqCtxPtr& ctx) { return monomial(ctx, 1, 1); }
  /// Sorts, merges equal exponents and drops zeros.
  static FqPoly from_terms(const FqCtxPtr& ctx, std::vector<Term> terms);
  /// Coefficient i of `coeffs` is the coefficient of T^i.
  static FqPoly from_dense(const FqCtxPtr& ctx, const std::vector<Fq>& coeffs);

  const FqCtxPtr& ctx() const { return ctx_; }
  const FqCtx& field() const { return *ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].exp == 0 && terms_[0].coeff == 1; }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == 0); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// -1 for the zero polynomial.
  std::int64_t degree() const { return terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.back().exp); }
  /// Exponent of the lowest term; 0 for the zero polynomial.
  std::uint64_t low_degree() const { return terms_.empty() ? 0 : terms_.front().exp; }
  Fq lead() const { return terms_.empty() ? 0 : terms_.back().coeff; }
  Fq coeff(std::uint64_t exp) const;
  Fq constant_term() const { return coeff(0); }

  std::vector<Fq> dense() const;

  FqPoly operator-() const;
  FqPoly scaled(Fq c) const;
  /// Multiplication by T^k.
  FqPoly shifted(std::uint64_t k) const;
  /// f^(p^k): exponents times p^k, coefficients through the Frobenius of F_q.
  FqPoly frobenius(std::uint64_t k) const;
  FqPoly monic() const;
  FqPoly derivative() const;
  FqPoly pow(std::uint64_t e) const;

  friend FqPoly operator+(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator-(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator*(const FqPoly& a, const FqPoly& b);
  FqPoly& operator+=(const FqPoly& b) { return *this = *this + b; }
  FqPoly& operator-=(const FqPoly& b) { return *this = *this - b; }
  FqPoly& operator*=(const FqPoly& b) { return *this = *this * b; }

  friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.terms_ == b.terms_; }
  /// Total order used for deterministic containers: by degree, then by
  /// coefficients from the top down.
  friend bool operator<(const FqPoly& a, const FqPoly& b);

  std::string to_string() const;

 private:
  FqCtxPtr ctx_;
  std::vector<Term> terms_;
};

/// Quotient and remainder; throws FieldError when dividing by zero.
std::pair<FqPoly, FqPoly> divmod(const FqPoly& f, const FqPoly& g);
/// Exact division; throws FieldError when g does not divide f.
FqPoly div_exact(const FqPoly& f, const FqPoly& g);
bool divides(const FqPoly& g, const FqPoly& f);

/// Monic gcd. Throws FieldError when both inputs are zero.
FqPoly poly_gcd(const FqPoly& f, const FqPoly& g);
/// Monic lcm. Throws FieldError when either input is zero.
FqPoly poly_lcm(const FqPoly& f, const FqPoly& g);

/// Inverse of a modulo the nonconstant m, when gcd(a, m) = 1.
FqPoly inverse_mod(const FqPoly& a, const FqPoly& m);
FqPoly rem(const FqPoly& f, const FqPoly& g);

}  // namespace tmlab
