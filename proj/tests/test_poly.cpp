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
#include "tmlab/poly.hpp"

using namespace tmlab;
using tmlab::testing::random_poly;

namespace {
FqPoly P(const FqCtxPtr& ctx, const char* s) { return parse_poly(ctx, s); }
}  // namespace

TEST_CASE("gcd examples") {
  auto f3 = FqCtx::prime(3);
  auto f2 = FqCtx::prime(2);
  CHECK(poly_gcd(P(f3, "T^2-1"), P(f3, "T-1")) == P(f3, "T-1"));
  CHECK(poly_gcd(P(f3, "T^5+T+2"), P(f3, "1")) == P(f3, "1"));
  CHECK(poly_gcd(P(f2, "T^2+T"), P(f2, "T^2")) == P(f2, "T"));
  CHECK_THROWS_AS(poly_gcd(FqPoly(f2), FqPoly(f2)), FieldError);
  CHECK(poly_lcm(P(f2, "T^2+T"), P(f2, "T^2")) == P(f2, "T^3+T^2"));
}

TEST_CASE("degree is additive and division is exact") {
  std::mt19937_64 rng(11);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3), FqCtx::make(2, {1, 1, 1})}) {
    for (int it = 0; it < 200; ++it) {
      FqPoly f = random_poly(ctx, rng, 9), g = random_poly(ctx, rng, 7);
      if (f.is_zero() || g.is_zero()) continue;
      FqPoly fg = f * g;
      CHECK(fg.degree() == f.degree() + g.degree());
      auto [q, r] = divmod(f, g);
      CHECK(q * g + r == f);
      CHECK(r.degree() < g.degree());
      CHECK(div_exact(fg, g) == f);
      FqPoly h = poly_gcd(f, g);
      CHECK(h.lead() == 1);
      CHECK(divides(h, f));
      CHECK(divides(h, g));
      CHECK(poly_lcm(f, g) * h == (f * g).monic());
    }
  }
}

TEST_CASE("Frobenius and pow agree") {
  std::mt19937_64 rng(5);
  for (auto ctx : {FqCtx::prime(3), FqCtx::make(2, {1, 1, 1})}) {
    for (int it = 0; it < 50; ++it) {
      FqPoly f = random_poly(ctx, rng, 5);
      CHECK(f.frobenius(1) == f.pow(ctx->p()));
      CHECK(f.frobenius(2) == f.pow(ctx->p() * ctx->p()));
      CHECK(f.pow(5) == f * f * f * f * f);
    }
  }
}

TEST_CASE("sparse storage handles huge exponents") {
  auto f2 = FqCtx::prime(2);
  FqPoly f = P(f2, "T+1").frobenius(40);
  CHECK(f.term_count() == 2);
  CHECK(f.degree() == (std::int64_t{1} << 40));
  CHECK(poly_gcd(f, P(f2, "T")) == P(f2, "1"));
  FqPoly g = P(f2, "T^3+T+1").frobenius(12);
  CHECK(divides(P(f2, "T^3+T+1"), g));
  CHECK(poly_gcd(g, P(f2, "T^3+T^2+1").frobenius(11)).is_one());
}

TEST_CASE("inverse modulo") {
  auto f3 = FqCtx::prime(3);
  FqPoly m = P(f3, "T^3+2*T+1");
  FqPoly a = P(f3, "T^2+1");
  CHECK(rem(inverse_mod(a, m) * a, m) == P(f3, "1"));
}
