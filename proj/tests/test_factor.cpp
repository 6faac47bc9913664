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

using namespace tmlab;

namespace {
FqPoly recombine(const FqCtxPtr& ctx, const std::vector<Factor>& fs) {
  FqPoly acc = FqPoly::constant(ctx, 1);
  for (const auto& f : fs) acc = acc * f.poly.pow(f.multiplicity);
  return acc;
}

// Enumerates all monic polynomials of exact degree n over F_p.
template <class Fn>
void for_each_monic(const FqCtxPtr& ctx, std::uint32_t n, Fn fn) {
  std::vector<Fq> c(n + 1, 0);
  c[n] = 1;
  for (;;) {
    fn(FqPoly::from_dense(ctx, c));
    std::uint32_t i = 0;
    while (i < n && ++c[i] == ctx->q()) c[i++] = 0;
    if (i == n) return;
  }
}
}  // namespace

TEST_CASE("factorization examples") {
  auto f2 = FqCtx::prime(2), f3 = FqCtx::prime(3);
  auto a = poly_factor(parse_poly(f2, "T^2+1"));
  REQUIRE(a.size() == 1);
  CHECK(a[0].poly == parse_poly(f2, "T+1"));
  CHECK(a[0].multiplicity == 2);

  auto irr = parse_poly(f2, "T^3+T+1");
  auto b = poly_factor(irr);
  REQUIRE(b.size() == 1);
  CHECK(b[0].poly == irr);
  CHECK(b[0].multiplicity == 1);

  auto c = poly_factor(parse_poly(f3, "T^3-T"));
  REQUIRE(c.size() == 3);
  CHECK(c[0].poly == parse_poly(f3, "T"));
  CHECK(c[1].poly == parse_poly(f3, "T+1"));
  CHECK(c[2].poly == parse_poly(f3, "T+2"));
  for (const auto& f : c) CHECK(f.multiplicity == 1);

  CHECK_THROWS_AS(poly_factor(FqPoly(f2)), FieldError);
}

TEST_CASE("irreducible counts match the necklace formula") {
  // Number of monic irreducibles of degree n over F_q: (1/n) sum_{k|n} mu(k) q^{n/k}.
  auto f2 = FqCtx::prime(2), f3 = FqCtx::prime(3);
  const std::size_t over2[] = {0, 2, 1, 2, 3, 6, 9, 18};
  const std::size_t over3[] = {0, 3, 3, 8, 18, 48};
  for (std::uint32_t n = 1; n < 8; ++n) CHECK(monic_irreducibles(f2, n).size() == over2[n]);
  for (std::uint32_t n = 1; n < 6; ++n) CHECK(monic_irreducibles(f3, n).size() == over3[n]);
}

TEST_CASE("factorization recombines exhaustively up to degree 8") {
  for (auto [ctx, maxdeg] : {std::pair{FqCtx::prime(2), 8u}, std::pair{FqCtx::prime(3), 8u}}) {
    std::size_t count = 0;
    for (std::uint32_t n = 1; n <= maxdeg; ++n) {
      for_each_monic(ctx, n, [&](const FqPoly& f) {
        auto fs = poly_factor(f);
        CHECK(recombine(ctx, fs) == f);
        for (const auto& fac : fs) CHECK(is_irreducible(fac.poly));
        ++count;
      });
    }
    CHECK(count > 0);
  }
}

TEST_CASE("factorization over an extension field") {
  auto f4 = FqCtx::make(2, {1, 1, 1});
  // T^2 + T + 1 splits over F_4.
  auto fs = poly_factor(parse_poly(f4, "T^2+T+1"));
  CHECK(fs.size() == 2);
  CHECK(recombine(f4, fs) == parse_poly(f4, "T^2+T+1"));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    FqPoly f = testing::random_nonzero_poly(f4, rng, 6);
    CHECK(recombine(f4, poly_factor(f)) == f.monic());
  }
}
