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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmlab/dynamics.hpp"
#include "tmlab/heights.hpp"
#include "tmlab/mpoly.hpp"
#include "tmlab/ore.hpp"

namespace tmlab {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Homogeneous system A c = 0 with A an M x L matrix over F_q[T], and the
/// degree bound B for the unknown polynomials c_j.
struct LinSysA {
  FqCtxPtr ctx;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<FqPoly> entries;  // row-major
  std::uint64_t bound = 0;
  static LinSysA zeros(const FqCtxPtr& ctx, std::size_t rows, std::size_t cols, std::uint64_t bound);
  FqPoly& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const FqPoly& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

struct SiegelResult {
  std::optional<std::vector<FqPoly>> solution;  // nonzero, deg <= B, A c = 0
  std::size_t unknowns = 0;                     // (B + 1) m L over F_p
  std::size_t equations = 0;
  std::size_t rank = 0;
};

/// Writes every c_j = sum_{b <= B, mu < m} x_{j,b,mu} w^mu T^b, expands
/// A c = 0 into F_p-linear equations, and returns the kernel vector of the
/// first free column. The solution is checked by substitution before it is
/// returned.
SiegelResult siegel_solve(const LinSysA& sys);

struct SiegelSweep {
  std::optional<std::uint64_t> smallest_bound;
  SiegelResult result;
  double dirichlet_prediction = 0.0;  // M h / (L - M), infinite when L <= M
  std::int64_t system_height = 0;     // height of the entry tuple
};

/// Runs siegel_solve for B = 0, 1, ..., max_bound and stops at the first
/// feasible bound.
SiegelSweep siegel_sweep(LinSysA sys, std::uint64_t max_bound);

/// Exact power p^{e} with rational exponent e, the form in which restricted
/// degrees are reported.
struct PowerOfP {
  std::uint32_t p = 2;
  Rational exponent;
  double value() const;
};

/// -1, 0, 1 as x is below, equal to or above p^{e}; x must be positive.
int compare(const BigRational& x, const PowerOfP& y);

class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The auxiliary-construction parameters.
struct ParamSet {
  BigRational delta1, delta2, delta3, delta4, delta_plus;
  BigRational c;  // 0 when the comparison conditions are not requested

  /// Checks 1 < d4 < d3 < d2 < d1 < delta_lambda < d+ and
  /// d2^{d+1} < d1^d d3, d1 < d2 d4; with `full`, also d2 > d4^{d+1+c} and
  /// p^c > (d+ delta_lambda^d)^d. Returns the first failed condition.
  std::optional<std::string> violation(const PowerOfP& delta_lambda, std::size_t d, bool full) const;
  /// Throws ParamError on violation.
  void validate(const PowerOfP& delta_lambda, std::size_t d, bool full) const;
  static BigRational parse(const std::string& text);
};

/// Chooses d+, then c, then d4 near 1, then d2 < delta_lambda, then d1 and d3,
/// in that order, so that every condition holds. Throws ParamError when
/// delta_lambda <= 1.
ParamSet pick_params(const PowerOfP& delta_lambda, std::size_t d);

std::string to_string(const BigRational& x);

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuxOptions {
  std::size_t max_unknowns = 2000;  // |U_N| times the number of powers
  std::uint64_t max_bound = 64;     // largest degree bound tried
};

/// G_N = sum_{u in U_N, l < d4^{dN}} c_{u,l} u Pi_N^l with the coefficients in
/// F_q[T] and the construction data kept for replay.
struct AuxPolynomial {
  MPoly g;
  std::vector<Monomial> monomials;  // U_N
  std::size_t powers = 0;           // number of exponents l
  std::vector<Monomial> labels_u;   // per coefficient
  std::vector<std::size_t> labels_l;
  std::vector<FqPoly> coeffs;  // c_{u,l}
  std::uint64_t target_order = 0;
  std::uint64_t order_at_zero = 0;
  std::uint64_t bound = 0;  // degree bound B used
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::int64_t max_coeff_height = 0;
  double height_target = 0.0;  // (d3 d4)^N
};

/// Builds G_N for Pi_N = lambda o F^N (lambda of width d, one row) with the
/// target order ceil((d2 d4)^N), sweeping the Siegel degree bound upward.
/// Throws InfeasibleError when the unknown count exceeds the budget or no
/// bound up to options.max_bound works.
AuxPolynomial build_aux_basic(const TwistedOperator& f, const TwistedOperator& lambda, const ParamSet& params,
                              std::size_t big_n, const AuxOptions& options = {});

/// Binomial coefficient modulo p by Lucas' theorem.
std::uint32_t binomial_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p);

/// Delta_i(G) as a polynomial: sum_a g_a prod_k binom(a_k, i_k) x^{a - i}.
MPoly hyperderivative_poly(const MPoly& g, const Monomial& idx);

/// Coefficient of z^i in G(z + Q).
RatFunc hyperderivative(const MPoly& g, const Monomial& idx, const PointK& q);

/// min |i| with Delta_i(G)(Q) != 0, capped at max_order. Throws
/// std::invalid_argument on the zero polynomial.
std::uint64_t vanishing_order(const MPoly& g, const PointK& q, std::uint64_t max_order);

struct V0Check {
  bool holds = true;
  std::uint64_t order_at_zero = 0;
  struct Row {
    Monomial idx;
    std::int64_t valuation;  // kInfiniteValuation when Delta_i(G)(Q) = 0
    std::int64_t required;   // order_at_zero - |i|
  };
  std::vector<Row> rows;
};

/// ord_v(G(Q)) >= ord_0(G). Throws IntegralityError unless every component
/// of Q lies in the maximal ideal at v and the coefficients of G are
/// v-integral.
bool v0_order_lower_bound_check(const MPoly& g, const PointK& q, const Place& v);

/// The hyperderivative form ord_v(Delta_i(G)(Q)) >= ord_0(G) - |i| for every
/// |i| <= max_index, with the same preconditions.
V0Check v0_hyperderivative_check(const MPoly& g, const PointK& q, const Place& v, std::uint64_t max_index);

/// All exponent vectors in d variables of total degree exactly s, in graded
/// order.
std::vector<Monomial> monomials_of_degree(std::size_t d, std::uint64_t s);

}  // namespace tmlab
