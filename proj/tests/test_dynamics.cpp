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
#include "tmlab/dynamics.hpp"

using namespace tmlab;
using tmlab::testing::op_from;
using tmlab::testing::rf;

namespace {
TwistedOperator carlitz(const FqCtxPtr& ctx) { return op_from(ctx, 1, 1, {{{"T"}}, {{"1"}}}); }
TwistedOperator carlitz_tensor2(const FqCtxPtr& ctx) {
  return op_from(ctx, 2, 2, {{{"T", "1"}, {"0", "T"}}, {{"0", "0"}, {"1", "0"}}});
}
PointK pt(const FqCtxPtr& ctx, std::initializer_list<const char*> cs) {
  PointK p;
  for (const char* c : cs) p.coords.push_back(rf(ctx, c));
  return p;
}
}  // namespace

TEST_CASE("progression detection") {
  std::vector<std::int64_t> lin{0, 1, 2, 3, 4, 5};
  auto a = detect_progression(lin);
  REQUIRE(a);
  CHECK(a->rate == Rational{1, 1});
  CHECK(a->offset == 0);

  std::vector<std::int64_t> half{0, 1, 1, 2, 2, 3, 3, 4};
  auto b = detect_progression(half);
  REQUIRE(b);
  CHECK(b->period == 2);
  CHECK(b->rate == Rational{1, 2});
  CHECK(b->predict(half, 10) == 5);
  CHECK(b->predict(half, 11) == 6);

  std::vector<std::int64_t> late{5, 0, 7, 1, 2, 3, 4};
  auto c = detect_progression(late);
  REQUIRE(c);
  CHECK(c->offset == 3);

  std::vector<std::int64_t> short_tail{0, 1, 3};
  CHECK_FALSE(detect_progression(short_tail));
  CHECK(Rational::make(4, -6) == Rational{-2, 3});
}

TEST_CASE("orbit examples") {
  auto f3 = FqCtx::prime(3), f2 = FqCtx::prime(2);
  auto zero = orbit(carlitz(f3), PointK::zero(f3, 1), 3);
  for (const auto& z : zero) CHECK(z.is_zero());
  auto o = orbit(carlitz(f3), pt(f3, {"1"}), 2);
  CHECK(o[1] == pt(f3, {"T+1"}));
  CHECK(o[2] == pt(f3, {"T^3+T^2+T+1"}));
  auto o2 = orbit(carlitz(f2), pt(f2, {"T"}), 1);
  CHECK(o2[1].is_zero());
}

TEST_CASE("orbit agrees with symbolic iterates") {
  std::mt19937_64 rng(41);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3)}) {
    for (int it = 0; it < 5; ++it) {
      const std::size_t d = 1 + rng() % 3;
      auto f = testing::random_operator(ctx, rng, d, d, 1, 2);
      auto x = testing::random_point(ctx, rng, d, 2);
      auto o = orbit(f, x, 6);
      IterateCache cache(f);
      for (std::size_t n = 0; n <= 6; ++n) CHECK(o[n] == evaluate(cache.get(n), x));
    }
  }
}

TEST_CASE("dynamic degree examples") {
  for (std::uint32_t p : {2u, 3u}) {
    auto rep = dynamic_degree(carlitz(FqCtx::prime(p)), 8);
    REQUIRE(rep.exact_rate);
    CHECK(rep.exact_rate->rate == Rational{1, 1});
    CHECK(*rep.delta() == doctest::Approx(p));
  }
  auto f2 = FqCtx::prime(2);
  auto rep = dynamic_degree(carlitz_tensor2(f2), 12);
  REQUIRE(rep.exact_rate);
  CHECK(rep.exact_rate->rate == Rational{1, 2});
  // The progression predicts three further iterates.
  std::vector<std::int64_t> t;
  for (const auto& r : rep.rows) t.push_back(r.tau_degree);
  IterateCache cache(carlitz_tensor2(f2));
  for (std::size_t n = 13; n <= 15; ++n)
    CHECK(rep.exact_rate->predict(t, n) == static_cast<std::int64_t>(cache.get(n).tau_degree()));

  auto a0 = op_from(f2, 2, 2, {{{"T", "1"}, {"1", "0"}}});
  auto flat = dynamic_degree(a0, 6);
  REQUIRE(flat.exact_rate);
  CHECK(*flat.delta() == 1.0);
  CHECK_THROWS_AS(dynamic_degree(TwistedOperator(f2, 1, 1), 3), std::invalid_argument);
}

TEST_CASE("restricted degree sees only the observed block") {
  auto f2 = FqCtx::prime(2);
  // Diagonal (tau, tau^2): the first coordinate grows like 2^n.
  auto diag = op_from(f2, 2, 2, {{{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "0"}}, {{"0", "0"}, {"0", "1"}}});
  auto first = op_from(f2, 1, 2, {{{"1", "0"}}});
  auto rep = restricted_degree(diag, first, 8);
  REQUIRE(rep.exact_rate);
  CHECK(rep.exact_rate->rate == Rational{1, 1});
  auto full = dynamic_degree(diag, 8);
  CHECK(full.exact_rate->rate == Rational{2, 1});
}

TEST_CASE("arithmetic degree examples") {
  auto f3 = FqCtx::prime(3), f2 = FqCtx::prime(2);
  auto rep = arithmetic_degree(carlitz(f3), pt(f3, {"1"}), nullptr, 6, 3.0);
  CHECK(rep.rows[1].height == 1);
  CHECK(rep.rows[2].height == 3);
  CHECK(rep.rows[3].height == 9);
  CHECK(rep.rows[4].ratio_estimate.value() == doctest::Approx(3.0));
  CHECK(rep.window_violations == 0);
  CHECK_FALSE(rep.heights_bounded);

  auto rep2 = arithmetic_degree(carlitz(f2), pt(f2, {"T^2"}), nullptr, 6);
  for (std::size_t n = 0; n <= 6; ++n) CHECK(rep2.rows[n].height == (std::int64_t{2} << n));
  CHECK(rep2.window_violations == 0);

  auto pre = arithmetic_degree(carlitz(f2), pt(f2, {"T"}), nullptr, 6);
  CHECK(pre.heights_bounded);

  auto lam = op_from(f2, 1, 2, {{{"1", "T"}}});
  auto with_lambda = arithmetic_degree(carlitz_tensor2(f2), pt(f2, {"T", "1"}), &lam, 8);
  CHECK(with_lambda.window_violations == 0);
}

TEST_CASE("window bound holds on random modules") {
  std::mt19937_64 rng(43);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3)}) {
    for (int it = 0; it < 4; ++it) {
      const std::size_t d = 1 + rng() % 2;
      auto f = testing::random_operator(ctx, rng, d, d, 1, 2);
      auto x = testing::random_point(ctx, rng, d, 2);
      auto lam = testing::random_operator(ctx, rng, 1, d, 1, 1);
      auto rep = arithmetic_degree(f, x, &lam, 5);
      CHECK(rep.window_violations == 0);
    }
  }
}

TEST_CASE("coefficient height bound") {
  auto f2 = FqCtx::prime(2), f3 = FqCtx::prime(3);
  auto c = truncbound_check(carlitz(f3), 8, 2.0, 4.0);
  CHECK(c.holds);
  CHECK(c.constant == 1);
  CHECK(c.margin <= 1.0);

  auto consts = truncbound_check(op_from(f2, 1, 1, {{{"1"}}, {{"1"}}}), 6, 1.5, 2.0);
  CHECK(consts.holds);
  CHECK(consts.margin == 0.0);

  auto t2 = truncbound_check(carlitz_tensor2(f2), 10, 1.2, 1.5);
  CHECK(t2.holds);
  CHECK(t2.margin <= 1.0);
  CHECK(t2.violations == 0);
  CHECK_THROWS_AS(truncbound_check(carlitz(f2), 3, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("residues") {
  auto f3 = FqCtx::prime(3);
  Place t = Place::finite(parse_poly(f3, "T"));
  Place q2 = Place::finite(parse_poly(f3, "T^2+1"));
  Place inf = Place::infinity(f3);
  CHECK(residue(rf(f3, "(T+2)/(T+1)"), t) == parse_poly(f3, "2"));
  CHECK(residue(rf(f3, "T^3"), q2) == parse_poly(f3, "2T"));
  CHECK(residue(rf(f3, "(2T+1)/(T+1)"), inf) == parse_poly(f3, "2"));
  CHECK(residue(rf(f3, "1/T"), inf).is_zero());
  CHECK_THROWS_AS(residue(rf(f3, "1/T"), t), IntegralityError);
  CHECK_THROWS_AS(residue(rf(f3, "T"), inf), IntegralityError);
  // residue is a ring map
  std::mt19937_64 rng(44);
  for (int i = 0; i < 50; ++i) {
    RatFunc a = RatFunc(testing::random_poly(f3, rng, 5)), b = RatFunc(testing::random_poly(f3, rng, 5));
    CHECK(residue(a * b, q2) == rem(residue(a, q2) * residue(b, q2), q2.poly()));
  }
}

TEST_CASE("reduction and shift") {
  auto f2 = FqCtx::prime(2), f3 = FqCtx::prime(3);
  Place t = Place::finite(parse_poly(f2, "T"));
  auto r = reduce_and_shift(carlitz(f2), pt(f2, {"1"}), t);
  CHECK(r.s1 == 0);
  CHECK(r.s2 == 1);
  CHECK(r.shifted == pt(f2, {"T"}));
  CHECK(r.verified);

  auto z = reduce_and_shift(carlitz(f2), pt(f2, {"T^2+T"}), t);
  CHECK(z.s1 == 0);
  CHECK(z.s2 == 1);
  CHECK(z.verified);

  for (const char* v : {"T", "T+1", "T^2+1", "T^2+T+2"}) {
    Place pl = Place::finite(parse_poly(f3, v));
    auto rr = reduce_and_shift(carlitz(f3), pt(f3, {"T^2+1"}), pl);
    CHECK(rr.s1 < rr.s2);
    CHECK(rr.s2 <= pl.residue_field_size() + 1);
    CHECK(rr.verified);
  }
  auto inf = reduce_and_shift(op_from(f3, 1, 1, {{{"1/T"}}, {{"1"}}}), pt(f3, {"1/(T+1)"}), Place::infinity(f3));
  CHECK(inf.verified);
  CHECK_THROWS_AS(reduce_and_shift(carlitz(f2), pt(f2, {"1/T"}), t), IntegralityError);
  CHECK_THROWS_AS(reduce_and_shift(op_from(f2, 1, 1, {{{"1/T"}}}), pt(f2, {"1"}), t), IntegralityError);
}

TEST_CASE("preperiodicity") {
  auto f2 = FqCtx::prime(2), f3 = FqCtx::prime(3);
  auto z = preperiodicity_probe(carlitz(f2), PointK::zero(f2, 1), 5, 100);
  CHECK(z.kind == PreperiodicityResult::Kind::preperiodic);
  CHECK(z.period == 1);
  auto t = preperiodicity_probe(carlitz(f2), pt(f2, {"T"}), 5, 100);
  CHECK(t.kind == PreperiodicityResult::Kind::preperiodic);
  CHECK(t.preperiod == 1);
  auto e = preperiodicity_probe(carlitz(f3), pt(f3, {"1"}), 10, 5);
  CHECK(e.kind == PreperiodicityResult::Kind::escaping);
  CHECK(e.escape_index == 3);
  CHECK(e.heights == std::vector<std::int64_t>{0, 1, 3, 9});
  auto inc = preperiodicity_probe(carlitz(f3), pt(f3, {"1"}), 2, 1000);
  CHECK(inc.kind == PreperiodicityResult::Kind::inconclusive);
}
