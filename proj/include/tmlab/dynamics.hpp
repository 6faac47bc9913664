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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmlab/heights.hpp"
#include "tmlab/ore.hpp"

namespace tmlab {

/// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// An eventual arithmetic progression t(n + period) = t(n) + step for all
/// sampled n >= offset.
struct Progression {
  std::size_t offset = 0;
  std::size_t period = 1;
  std::int64_t step = 0;
  Rational rate;  // step / period
  /// Predicted t(n) for n >= offset, extrapolated from the sampled values.
  std::int64_t predict(std::span<const std::int64_t> t, std::size_t n) const;
};

/// Smallest period, then smallest offset, such that the progression holds on
/// the whole sampled tail and the tail spans at least `min_periods` periods.
/// Entries of `t` must be defined (no negative markers).
std::optional<Progression> detect_progression(std::span<const std::int64_t> t, std::size_t min_periods = 3);

/// Forward orbit P, F(P), ..., F^N(P) by repeated evaluation.
std::vector<PointK> orbit(const TwistedOperator& f, const PointK& x, std::size_t n);

struct GrowthRow {
  std::size_t n = 0;
  std::int64_t tau_degree = -1;                // -1 when the operator is zero
  std::int64_t height = -1;                    // -1 when not measured
  std::optional<double> root_estimate;         // p^(t/n) or h^(1/n)
  std::optional<double> ratio_estimate;        // h_n / h_{n-1}
  std::optional<double> proxy;                 // h_n / delta^n when delta is exact
  std::optional<std::int64_t> coeff_height;    // joint height of the operator's coefficients
  std::optional<std::int64_t> window_bound;    // rigorous upper bound for height
};

struct GrowthReport {
  std::uint32_t p = 2;
  std::uint32_t q = 2;
  std::vector<GrowthRow> rows;
  std::optional<Progression> exact_rate;  // progression of the tau-degrees
  /// p^rate when the progression was detected.
  std::optional<double> delta() const;
  /// Windows where the measured height exceeded its rigorous bound.
  std::size_t window_violations = 0;
  bool heights_bounded = false;  // orbit heights constant over the last third
};

/// t(n) = tau-degree of F^n for n <= n_max, with the joint coefficient height
/// of each iterate. exact_rate is set when t(n) is eventually arithmetic.
GrowthReport dynamic_degree(const TwistedOperator& f, std::size_t n_max, IterateCache* cache = nullptr);

/// As dynamic_degree for the restricted iterates lambda o F^n, built by
/// right chaining lambda o F^{n+1} = (lambda o F^n) o F.
GrowthReport restricted_degree(const TwistedOperator& f, const TwistedOperator& lambda, std::size_t n_max);

/// Heights h_n of F^n(P), or of lambda(F^n(P)) when lambda is given, with
/// the estimators and the bound
///   h_n <= h(coefficients of lambda o F^n) + p^{t(n)} h(P)
/// checked for every n. `delta` (exact, when known) feeds the proxy column.
GrowthReport arithmetic_degree(const TwistedOperator& f, const PointK& x, const TwistedOperator* lambda,
                               std::size_t n_max, std::optional<double> delta = std::nullopt);

struct TruncboundResult {
  bool holds = true;
  std::int64_t constant = 0;      // C, the joint height of all entries of A_0..A_r
  double margin = 0.0;            // max over (n, i) of h(A_{n,i}) / (n p^i)
  std::size_t violations = 0;
  struct Row {
    std::size_t n;
    std::size_t i;
    std::int64_t height;
    std::int64_t bound;  // C n p^i, saturated at INT64_MAX
  };
  std::vector<Row> rows;
  /// Per n: max height over coefficients with p^i <= s^n, against s_plus^n.
  struct LowTwistRow {
    std::size_t n;
    std::int64_t max_height;
    double s_plus_power;
  };
  std::vector<LowTwistRow> low_twist_rows;
};

/// Checks h(A_{n,i}) <= C n p^i for every coefficient of every iterate
/// 1 <= n <= n_max. Throws std::invalid_argument unless 1 <= s < s_plus.
TruncboundResult truncbound_check(const TwistedOperator& f, std::size_t n_max, double s, double s_plus,
                                  IterateCache* cache = nullptr);

class IntegralityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Residue of a v-integral element in k(v), as a polynomial of degree below
/// deg v (a constant at infinity). Throws IntegralityError otherwise.
FqPoly residue(const RatFunc& a, const Place& v);

struct ReductionReport {
  Place place;
  std::vector<std::vector<FqPoly>> residues;  // residues of F^n P for n <= s2
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  std::uint64_t pigeonhole_bound = 0;  // |k(v)|^d + 1, saturated
  PointK shifted;                      // (F^{s2} - F^{s1})(P)
  bool verified = false;               // every component has valuation >= 1
};

/// Reduces the orbit modulo v, finds the first repeated residue and returns
/// Q = F^{s2}P - F^{s1}P, checked exactly. Throws IntegralityError when P or
/// a coefficient of F is not integral at v.
ReductionReport reduce_and_shift(const TwistedOperator& f, const PointK& x, const Place& v);

struct PreperiodicityResult {
  enum class Kind { preperiodic, escaping, inconclusive };
  Kind kind = Kind::inconclusive;
  std::size_t preperiod = 0;  // first index of the cycle
  std::size_t period = 0;
  std::size_t escape_index = 0;  // first n with h > cap
  std::vector<std::int64_t> heights;
  static const char* name(Kind k);
};

/// Looks for an exact repetition F^a P = F^b P with a < b <= n_max; stops
/// early once heights exceed `height_cap` after increasing for three steps
/// (or from the start).
PreperiodicityResult preperiodicity_probe(const TwistedOperator& f, const PointK& x, std::size_t n_max,
                                          std::int64_t height_cap);

/// Joint height of every entry of every coefficient matrix.
HeightValue operator_height(const TwistedOperator& f);

}  // namespace tmlab
