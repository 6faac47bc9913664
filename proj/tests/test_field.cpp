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

#include "doctest.h"
#include "tmlab/field.hpp"

using namespace tmlab;

TEST_CASE("F_4 multiplication reduces by the modulus") {
  auto f4 = FqCtx::make(2, {1, 1, 1});
  const Fq x = f4->from_digits({0, 1});
  const Fq x_plus_1 = f4->from_digits({1, 1});
  CHECK(f4->mul(x, x) == x_plus_1);
  CHECK(f4->to_string(x_plus_1) == "(1,1)");
}

TEST_CASE("identity and characteristic two") {
  auto f8 = FqCtx::make(2, {1, 1, 0, 1});
  for (Fq a = 0; a < f8->q(); ++a) {
    CHECK(f8->mul(a, 1) == a);
    CHECK(f8->add(a, a) == 0);
  }
}

TEST_CASE("field axioms hold exhaustively for small fields") {
  for (auto ctx : {FqCtx::prime(5), FqCtx::make(3, {2, 2, 1}), FqCtx::make(2, {1, 1, 0, 0, 1})}) {
    const Fq q = ctx->q();
    for (Fq a = 0; a < q; ++a) {
      CHECK(ctx->pow(a, q) == a);
      CHECK(ctx->add(a, ctx->neg(a)) == 0);
      if (a) CHECK(ctx->mul(a, ctx->inv(a)) == 1);
      for (Fq b = 0; b < q; ++b) {
        CHECK(ctx->add(a, b) == ctx->add(b, a));
        CHECK(ctx->mul(a, b) == ctx->mul(b, a));
        CHECK(ctx->frob(ctx->add(a, b), 1) == ctx->add(ctx->frob(a, 1), ctx->frob(b, 1)));
        for (Fq c = 0; c < q; c += 3) {
          CHECK(ctx->mul(a, ctx->add(b, c)) == ctx->add(ctx->mul(a, b), ctx->mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("checked arithmetic rejects division by zero and foreign contexts") {
  auto f3 = FqCtx::prime(3);
  auto f9 = FqCtx::make(3, {1, 0, 1});
  FqElem two(f3, 2), zero(f3, 0), other(f9, 1);
  CHECK((two * two).raw() == 1);
  CHECK((two / two).raw() == 1);
  CHECK_THROWS_AS(two / zero, FieldError);
  CHECK_THROWS_AS(two + other, FieldError);
  CHECK(fq_arith(two, two, FqOp::sub).is_zero());
}

TEST_CASE("construction validates its inputs") {
  CHECK_THROWS_AS(FqCtx::make(4, {1, 1}), FieldError);
  CHECK_THROWS_AS(FqCtx::make(2, {1, 0, 1}), FieldError);  // x^2 + 1 = (x+1)^2
  CHECK_THROWS_AS(FqCtx::make(3, {1, 1, 2}), FieldError);  // not monic
  CHECK_NOTHROW(FqCtx::make(3, {1, 0, 1}));
  CHECK(FqCtx::prime(7) == FqCtx::prime(7));
}
