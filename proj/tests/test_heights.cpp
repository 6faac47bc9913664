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
#include "tmlab/factor.hpp"
#include "tmlab/heights.hpp"

using namespace tmlab;
using tmlab::testing::random_nonzero_ratfunc;
using tmlab::testing::random_ratfunc;
using tmlab::testing::rf;

TEST_CASE("valuation examples") {
  auto f2 = FqCtx::prime(2);
  Place t = Place::finite(parse_poly(f2, "T"));
  Place inf = Place::infinity(f2);
  CHECK(valuation(rf(f2, "T"), t) == 1);
  CHECK(valuation(rf(f2, "T"), inf) == -1);
  CHECK(valuation(rf(f2, "(T+1)/T^2"), t) == -2);
  CHECK(valuation(rf(f2, "0"), t) == kInfiniteValuation);
  CHECK_THROWS_AS(Place::finite(parse_poly(f2, "T^2+1")), FieldError);
  CHECK(Place::finite(parse_poly(f2, "T^2+T+1")).residue_field_size() == 4);
}

TEST_CASE("valuation is additive") {
  std::mt19937_64 rng(4);
  auto f3 = FqCtx::prime(3);
  std::vector<Place> places{Place::infinity(f3), Place::finite(parse_poly(f3, "T")),
                            Place::finite(parse_poly(f3, "T^2+1"))};
  for (int i = 0; i < 100; ++i) {
    RatFunc a = random_nonzero_ratfunc(f3, rng, 4), b = random_nonzero_ratfunc(f3, rng, 4);
    for (const auto& v : places) CHECK(valuation(a * b, v) == valuation(a, v) + valuation(b, v));
  }
}

TEST_CASE("height examples") {
  auto f2 = FqCtx::prime(2);
  auto f4 = FqCtx::make(2, {1, 1, 1});
  CHECK(height(rf(f4, "w")).value == 0);
  CHECK(height(rf(f2, "T")).value == 1);
  std::vector<RatFunc> tuple{rf(f2, "1/T"), rf(f2, "T")};
  CHECK(height_tuple(tuple).value == 2);
  CHECK(height_tuple_by_places(tuple).value == 2);
}

TEST_CASE("height of polynomial coefficients") {
  auto f2 = FqCtx::prime(2);
  MPoly x1 = MPoly::variable(f2, 2, 0), x2 = MPoly::variable(f2, 2, 1);
  CHECK(height_poly(x1 + x2).value == 0);
  CHECK(height_poly((x1 * x1).scaled(rf(f2, "T"))).value == 1);
  CHECK(height_poly(x1.scaled(rf(f2, "1/T")) + x2.scaled(rf(f2, "T^2"))).value == 3);
  CHECK_THROWS_AS(height_poly(MPoly(f2, 2)), std::invalid_argument);
}

TEST_CASE("Frobenius scaling and tuple bounds") {
  std::mt19937_64 rng(8);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3)}) {
    for (int i = 0; i < 200; ++i) {
      RatFunc a = random_ratfunc(ctx, rng, 5);
      CHECK(height(a.frobenius(1)).value == static_cast<std::int64_t>(ctx->p()) * height(a).value);
      std::vector<RatFunc> t{random_ratfunc(ctx, rng, 4), random_ratfunc(ctx, rng, 4), random_ratfunc(ctx, rng, 4)};
      std::int64_t mx = 0, sum = 0;
      for (const auto& x : t) {
        mx = std::max(mx, height(x).value);
        sum += height(x).value;
      }
      const std::int64_t h = height_tuple(t).value;
      CHECK(mx <= h);
      CHECK(h <= sum);
    }
  }
}

TEST_CASE("fast path equals definition path") {
  std::mt19937_64 rng(9);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3), FqCtx::make(2, {1, 1, 1})}) {
    for (int i = 0; i < 150; ++i) {
      std::vector<RatFunc> t;
      const int len = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < len; ++j) t.push_back(random_ratfunc(ctx, rng, 5));
      CHECK(height_tuple(t) == height_tuple_by_places(t));
    }
  }
}

TEST_CASE("product formula examples") {
  auto f2 = FqCtx::prime(2);
  CHECK(product_formula_check(rf(f2, "T")));
  CHECK(product_formula_check(rf(f2, "1")));
  CHECK(product_formula_check(rf(f2, "(T^2+1)/(T^3+T+1)")));
  CHECK(degree_sum(rf(f2, "(T^2+1)/(T^3+T+1)")) == 0);
  CHECK(support(rf(f2, "(T^2+1)/(T^3+T+1)")).size() == 3);
  CHECK_THROWS_AS(product_formula_check(rf(f2, "0")), std::invalid_argument);
}
