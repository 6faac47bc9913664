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

#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "tmlab/siegel.hpp"

using namespace tmlab;
using tmlab::testing::op_from;
using tmlab::testing::random_nonzero_ratfunc;
using tmlab::testing::random_poly;
using tmlab::testing::rf;

namespace {

FqPoly poly(const FqCtxPtr& ctx, const char* s) { return rf(ctx, s).num(); }

void check_kernel(const LinSysA& sys, const std::vector<FqPoly>& c) {
  REQUIRE(c.size() == sys.cols);
  bool nonzero = false;
  for (const auto& x : c) {
    nonzero = nonzero || !x.is_zero();
    CHECK(x.degree() <= static_cast<std::int64_t>(sys.bound));
  }
  CHECK(nonzero);
  for (std::size_t r = 0; r < sys.rows; ++r) {
    FqPoly acc(sys.ctx);
    for (std::size_t j = 0; j < sys.cols; ++j) acc += sys.at(r, j) * c[j];
    CHECK(acc.is_zero());
  }
}

// Brute force over all vectors with entries of degree <= b; true when a
// nonzero kernel vector exists.
bool brute_force_feasible(const LinSysA& sys) {
  const std::uint32_t q = sys.ctx->q();
  const std::size_t per = sys.bound + 1;
  const std::size_t digits = per * sys.cols;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < digits; ++i) total *= q;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t x = code;
    std::vector<FqPoly> c;
    for (std::size_t j = 0; j < sys.cols; ++j) {
      std::vector<Fq> dense(per);
      for (auto& v : dense) {
        v = static_cast<Fq>(x % q);
        x /= q;
      }
      c.push_back(FqPoly::from_dense(sys.ctx, dense));
    }
    bool ok = true;
    for (std::size_t r = 0; r < sys.rows && ok; ++r) {
      FqPoly acc(sys.ctx);
      for (std::size_t j = 0; j < sys.cols; ++j) acc += sys.at(r, j) * c[j];
      ok = acc.is_zero();
    }
    if (ok) return true;
  }
  return false;
}

PowerOfP pw(std::uint32_t p, std::int64_t a, std::int64_t b) { return PowerOfP{p, Rational::make(a, b)}; }

}  // namespace

TEST_CASE("one equation in two unknowns") {
  auto ctx = FqCtx::prime(2);
  LinSysA sys = LinSysA::zeros(ctx, 1, 2, 1);
  sys.at(0, 0) = poly(ctx, "1");
  sys.at(0, 1) = poly(ctx, "T");
  SiegelResult r = siegel_solve(sys);
  REQUIRE(r.solution);
  check_kernel(sys, *r.solution);
  // Up to a scalar the only solution of degree <= 1 is (T, -1).
  const auto& c = *r.solution;
  CHECK(c[0] == FqPoly::T(ctx).scaled(c[1].lead()));
  CHECK(c[1].degree() == 0);

  sys.bound = 0;
  CHECK_FALSE(siegel_solve(sys).solution);
}

TEST_CASE("zero system returns a unit vector") {
  auto ctx = FqCtx::prime(3);
  LinSysA sys = LinSysA::zeros(ctx, 2, 3, 2);
  SiegelResult r = siegel_solve(sys);
  REQUIRE(r.solution);
  check_kernel(sys, *r.solution);
  std::size_t nonzero = 0;
  for (const auto& c : *r.solution) nonzero += c.is_zero() ? 0 : 1;
  CHECK(nonzero == 1);
}

TEST_CASE("random systems agree with brute force") {
  std::mt19937_64 rng(11);
  auto f2 = FqCtx::prime(2);
  for (int trial = 0; trial < 12; ++trial) {
    LinSysA sys = LinSysA::zeros(f2, 2, 5, 0);
    for (auto& e : sys.entries) e = random_poly(f2, rng, 2);
    for (std::uint64_t b = 0; b <= 1; ++b) {
      sys.bound = b;
      SiegelResult r = siegel_solve(sys);
      CHECK(r.solution.has_value() == brute_force_feasible(sys));
      if (r.solution) check_kernel(sys, *r.solution);
    }
  }
  auto f4 = FqCtx::make(2, {1, 1, 1});
  for (int trial = 0; trial < 6; ++trial) {
    LinSysA sys = LinSysA::zeros(f4, 2, 3, 0);
    for (auto& e : sys.entries) e = random_poly(f4, rng, 1);
    SiegelResult r = siegel_solve(sys);
    CHECK(r.solution.has_value() == brute_force_feasible(sys));
    if (r.solution) check_kernel(sys, *r.solution);
  }
}

TEST_CASE("sweep finds the smallest bound") {
  auto ctx = FqCtx::prime(2);
  std::mt19937_64 rng(5);
  LinSysA sys = LinSysA::zeros(ctx, 2, 5, 0);
  for (auto& e : sys.entries) e = random_poly(ctx, rng, 3);
  SiegelSweep sw = siegel_sweep(sys, 8);
  REQUIRE(sw.smallest_bound);
  for (std::uint64_t b = 0; b < *sw.smallest_bound; ++b) {
    sys.bound = b;
    CHECK_FALSE(siegel_solve(sys).solution);
  }
  sys.bound = *sw.smallest_bound;
  check_kernel(sys, *sw.result.solution);
  CHECK(sw.dirichlet_prediction == doctest::Approx(2.0 * static_cast<double>(sw.system_height) / 3.0));
}

TEST_CASE("rational comparison with powers of p") {
  CHECK(compare(BigRational(2), pw(2, 1, 1)) == 0);
  CHECK(compare(BigRational(3, 2), pw(2, 1, 2)) > 0);  // 2.25 > 2
  CHECK(compare(BigRational(7, 5), pw(2, 1, 2)) < 0);  // 1.96 < 2
  CHECK(compare(BigRational(1, 3), pw(3, -1, 1)) == 0);
  CHECK_THROWS_AS(compare(BigRational(0), pw(2, 1, 1)), std::invalid_argument);
}

TEST_CASE("rational parsing") {
  CHECK(ParamSet::parse("5/2") == BigRational(5, 2));
  CHECK(ParamSet::parse("1.25") == BigRational(5, 4));
  CHECK(ParamSet::parse("3") == BigRational(3));
  CHECK(ParamSet::parse("0.5/2") == BigRational(1, 4));
  CHECK_THROWS_AS(ParamSet::parse("1/0"), ParamError);
  CHECK_THROWS_AS(ParamSet::parse("x"), ParamError);
  CHECK(to_string(BigRational(6, 4)) == "3/2");
  CHECK(to_string(BigRational(4, 2)) == "2");
}

TEST_CASE("hand-picked parameters for the Carlitz module") {
  ParamSet ps;
  ps.delta4 = BigRational(3, 2);
  ps.delta3 = BigRational(8, 5);
  ps.delta2 = BigRational(17, 10);
  ps.delta1 = BigRational(19, 10);
  ps.delta_plus = BigRational(5, 2);
  CHECK_FALSE(ps.violation(pw(2, 1, 1), 1, false));
  ParamSet bad = ps;
  bad.delta1 = BigRational(21, 10);
  CHECK(bad.violation(pw(2, 1, 1), 1, false));
  bad = ps;
  bad.delta3 = BigRational(151, 100);  // 2.89 >= 1.9 * 1.51
  CHECK(bad.violation(pw(2, 1, 1), 1, false));
  CHECK_THROWS_AS(bad.validate(pw(2, 1, 1), 1, false), ParamError);
}

TEST_CASE("picker satisfies every condition") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::size_t d = 1; d <= 3; ++d) {
      for (auto [a, b] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 2}, {1, 7}}) {
        const PowerOfP dl = pw(p, a, b);
        CAPTURE(p);
        CAPTURE(d);
        CAPTURE(a);
        CAPTURE(b);
        ParamSet ps = pick_params(dl, d);
        CHECK_FALSE(ps.violation(dl, d, true));
        CHECK(ps.c > 0);
        CHECK(compare(ps.delta1, dl) < 0);
        CHECK(compare(ps.delta_plus, dl) > 0);
      }
    }
  }
  CHECK_THROWS_AS(pick_params(pw(2, 0, 1), 1), ParamError);
  CHECK_THROWS_AS(pick_params(pw(2, -1, 2), 1), ParamError);
}

TEST_CASE("monomials of a given degree") {
  CHECK(monomials_of_degree(1, 4) == std::vector<Monomial>{{4}});
  auto m = monomials_of_degree(3, 2);
  CHECK(m.size() == 6);
  CHECK(m.front() == Monomial{2, 0, 0});
  CHECK(m.back() == Monomial{0, 0, 2});
  CHECK(monomials_of_degree(0, 0).size() == 1);
  CHECK(monomials_of_degree(0, 1).empty());
}

TEST_CASE("Lucas binomials") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::uint64_t n = 0; n < 40; ++n) {
      std::vector<std::uint64_t> pascal(n + 1, 0);
      pascal[0] = 1;
      for (std::uint64_t i = 1; i <= n; ++i)
        for (std::uint64_t k = i; k > 0; --k) pascal[k] = (pascal[k] + pascal[k - 1]) % p;
      for (std::uint64_t k = 0; k <= n + 1; ++k) {
        const std::uint64_t want = k <= n ? pascal[k] : 0;
        CHECK(binomial_mod_p(n, k, p) == want);
      }
    }
  }
  CHECK(binomial_mod_p(std::uint64_t{1} << 40, std::uint64_t{1} << 39, 2) == 0);
  CHECK(binomial_mod_p(std::uint64_t{1} << 40, std::uint64_t{1} << 40, 2) == 1);
}

TEST_CASE("hyperderivatives are Taylor coefficients") {
  std::mt19937_64 rng(3);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3)}) {
    const std::size_t d = 2;
    for (int trial = 0; trial < 4; ++trial) {
      MPoly g(ctx, d);
      for (int t = 0; t < 5; ++t) {
        Monomial m{static_cast<std::uint32_t>(rng() % 5), static_cast<std::uint32_t>(rng() % 4)};
        g.add_term(m, random_nonzero_ratfunc(ctx, rng, 1));
      }
      PointK q = PointK::zero(ctx, d);
      for (auto& c : q.coords) c = random_nonzero_ratfunc(ctx, rng, 1);
      // G(z + Q) expanded as a polynomial in z, compared coefficientwise.
      std::vector<MPoly> shifted;
      for (std::size_t i = 0; i < d; ++i)
        shifted.push_back(MPoly::variable(ctx, d, i) + MPoly::constant(ctx, d, q.coords[i]));
      MPoly expansion(ctx, d);
      for (const auto& [a, c] : g.terms()) {
        MPoly term = MPoly::constant(ctx, d, c);
        for (std::size_t i = 0; i < d; ++i) term = term * shifted[i].pow(a[i]);
        expansion += term;
      }
      for (std::uint64_t s = 0; s <= 8; ++s) {
        for (const auto& idx : monomials_of_degree(d, s)) {
          const auto& terms = expansion.terms();
          auto it = terms.find(idx);
          const RatFunc want = it == terms.end() ? RatFunc(ctx) : it->second;
          CHECK(hyperderivative(g, idx, q) == want);
        }
      }
      // K-linearity.
      const RatFunc k = random_nonzero_ratfunc(ctx, rng, 2);
      MPoly h(ctx, d);
      h.add_term(Monomial{2, 1}, rf(ctx, "T"));
      for (const auto& idx : monomials_of_degree(d, 2)) {
        CHECK(hyperderivative(g.scaled(k) + h, idx, q) == hyperderivative(g, idx, q) * k + hyperderivative(h, idx, q));
      }
    }
  }
}

TEST_CASE("vanishing order") {
  auto ctx = FqCtx::prime(2);
  MPoly x = MPoly::variable(ctx, 1, 0);
  PointK zero = PointK::zero(ctx, 1);
  CHECK(vanishing_order(x.pow(2), zero, 100) == 2);
  CHECK(vanishing_order(x.pow(5) + x.pow(3), zero, 100) == 3);
  CHECK(vanishing_order(x.pow(5), zero, 4) == 4);
  PointK one{{rf(ctx, "1")}};
  // (x + 1)^4 vanishes to order 4 at 1.
  CHECK(vanishing_order((x + MPoly::constant(ctx, 1, rf(ctx, "1"))).pow(4), one, 100) == 4);
  // The zero-point shortcut agrees with the hyperderivative scan.
  MPoly y = MPoly::variable(ctx, 2, 1), z = MPoly::variable(ctx, 2, 0);
  MPoly g = z.pow(3) * y + y.pow(6);
  PointK zero2 = PointK::zero(ctx, 2);
  CHECK(vanishing_order(g, zero2, 100) == 4);
  std::uint64_t scan = 100;
  for (std::uint64_t s = 0; s < 100 && scan == 100; ++s)
    for (const auto& idx : monomials_of_degree(2, s))
      if (!hyperderivative(g, idx, zero2).is_zero()) {
        scan = s;
        break;
      }
  CHECK(scan == 4);
  CHECK_THROWS_AS(vanishing_order(MPoly(ctx, 1), zero, 3), std::invalid_argument);
}

TEST_CASE("order at a point in the maximal ideal") {
  auto ctx = FqCtx::prime(3);
  const Place v = Place::finite(poly(ctx, "T"));
  MPoly x = MPoly::variable(ctx, 2, 0), y = MPoly::variable(ctx, 2, 1);
  MPoly g = x.pow(2) * y.scaled(rf(ctx, "T + 1")) + y.pow(4) + x.pow(3).scaled(rf(ctx, "1/(T + 1)"));
  PointK q{{rf(ctx, "T"), rf(ctx, "T^2/(T + 2)")}};
  CHECK(v0_order_lower_bound_check(g, q, v));
  V0Check chk = v0_hyperderivative_check(g, q, v, 3);
  CHECK(chk.holds);
  CHECK(chk.order_at_zero == 3);
  CHECK(chk.rows.size() == 1 + 2 + 3 + 4);

  PointK outside{{rf(ctx, "1"), rf(ctx, "T")}};
  CHECK_THROWS_AS(v0_order_lower_bound_check(g, outside, v), IntegralityError);
  MPoly bad = g + x.pow(3).scaled(rf(ctx, "1/T"));
  CHECK_THROWS_AS(v0_hyperderivative_check(bad, q, v, 1), IntegralityError);
}

TEST_CASE("auxiliary polynomial for the Carlitz module") {
  auto ctx = FqCtx::prime(2);
  TwistedOperator f = op_from(ctx, 1, 1, {{{"T"}}, {{"1"}}});
  TwistedOperator lambda = TwistedOperator::identity(ctx, 1);
  ParamSet ps;
  ps.delta4 = BigRational(3, 2);
  ps.delta3 = BigRational(8, 5);
  ps.delta2 = BigRational(17, 10);
  ps.delta1 = BigRational(19, 10);
  ps.delta_plus = BigRational(5, 2);
  for (std::size_t n = 1; n <= 3; ++n) {
    CAPTURE(n);
    AuxPolynomial aux = build_aux_basic(f, lambda, ps, n);
    CHECK_FALSE(aux.g.is_zero());
    CHECK(aux.order_at_zero >= aux.target_order);
    CHECK(aux.coeffs.size() == aux.unknowns);
    // Replay G from the recorded coefficients.
    const MPoly pi = pullback_coordinates(compose(lambda, iterate(f, n)))[0];
    MPoly replay(ctx, 1);
    for (std::size_t j = 0; j < aux.coeffs.size(); ++j)
      replay += (MPoly::monomial(ctx, aux.labels_u[j], RatFunc::constant(ctx, 1)) * pi.pow(aux.labels_l[j]))
                    .scaled(RatFunc(aux.coeffs[j]));
    CHECK(replay == aux.g);
  }
  AuxPolynomial n3 = build_aux_basic(f, lambda, ps, 3);
  CHECK(n3.target_order == 17);  // ceil(2.55^3)
}

TEST_CASE("auxiliary polynomial with picked parameters and a tensor power") {
  auto ctx = FqCtx::prime(2);
  TwistedOperator f = op_from(ctx, 2, 2, {{{"T", "1"}, {"0", "T"}}, {{"0", "0"}, {"1", "0"}}});
  TwistedOperator lambda = op_from(ctx, 1, 2, {{{"1", "0"}}});
  // delta_lambda = 2^{1/2} for the first coordinate of the second tensor power.
  ParamSet ps = pick_params(pw(2, 1, 2), 2);
  AuxOptions opt;
  opt.max_unknowns = 400;
  AuxPolynomial aux = build_aux_basic(f, lambda, ps, 2, opt);
  CHECK(aux.order_at_zero >= aux.target_order);

  opt.max_unknowns = 0;
  CHECK_THROWS_AS(build_aux_basic(f, lambda, ps, 2, opt), InfeasibleError);
}
