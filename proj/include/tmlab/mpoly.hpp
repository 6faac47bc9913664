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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tmlab/ratfunc.hpp"

namespace tmlab {

/// Exponent vector of a monomial x_1^{e_1} ... x_d^{e_d}.
using Monomial = std::vector<std::uint32_t>;

std::uint64_t total_degree(const Monomial& m);

/// Graded lexicographic order: total degree first, then lex with x_1 highest.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over K in a fixed number of variables.
class MPoly {
 public:
  using TermMap = std::map<Monomial, RatFunc, GradedLex>;

  MPoly(FqCtxPtr ctx, std::size_t nvars) : ctx_(std::move(ctx)), nvars_(nvars) {}

  static MPoly constant(const FqCtxPtr& ctx, std::size_t nvars, const RatFunc& c);
  /// The coordinate function x_i (0-based).
  static MPoly variable(const FqCtxPtr& ctx, std::size_t nvars, std::size_t i);
  static MPoly monomial(const FqCtxPtr& ctx, const Monomial& m, const RatFunc& c);

  const FqCtxPtr& ctx() const { return ctx_; }
  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Adds c * m in place.
  void add_term(const Monomial& m, const RatFunc& c);
  RatFunc coeff(const Monomial& m) const;

  /// Highest total degree present; 0 for the zero polynomial.
  std::uint64_t total_degree() const;
  /// Lowest total degree present, i.e. the order of vanishing at the origin.
  /// Returns UINT64_MAX for the zero polynomial.
  std::uint64_t lowest_degree() const;

  std::vector<RatFunc> coefficients() const;

  MPoly scaled(const RatFunc& c) const;
  /// Coefficients raised to p^k, exponents multiplied by p^k; equals the
  /// p^k-th power in characteristic p.
  MPoly frobenius(std::uint64_t k) const;
  MPoly pow(std::uint64_t e) const;

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly& operator+=(const MPoly& b);

  friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }

  RatFunc evaluate(std::span<const RatFunc> point) const;

  std::string to_string() const;

 private:
  FqCtxPtr ctx_;
  std::size_t nvars_;
  TermMap terms_;
};

}  // namespace tmlab
