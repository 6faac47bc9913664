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

#include <cmath>
#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "tmlab/saturation.hpp"

using namespace tmlab;
using tmlab::testing::op_from;
using tmlab::testing::rf;

namespace {
TwistedOperator carlitz(const FqCtxPtr& ctx) { return op_from(ctx, 1, 1, {{{"T"}}, {{"1"}}}); }
TwistedOperator diagonal_12(const FqCtxPtr& ctx) {
  return op_from(ctx, 2, 2, {{{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "0"}}, {{"0", "0"}, {"0", "1"}}});
}

// All subset sums of {q^n j : 0 <= n < N, 1 <= j < L}.
std::set<std::uint64_t> subset_sums(std::uint64_t q, std::size_t big_n, std::size_t big_l) {
  std::vector<std::uint64_t> items;
  std::uint64_t qn = 1;
  for (std::size_t n = 0; n < big_n; ++n, qn *= q)
    for (std::size_t j = 1; j < big_l; ++j) items.push_back(qn * j);
  std::set<std::uint64_t> sums;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < items.size(); ++k)
      if (mask >> k & 1) s += items[k];
    sums.insert(s);
  }
  return sums;
}
}  // namespace

TEST_CASE("psi functions") {
  auto f2 = FqCtx::prime(2);
  auto b = psi_build(carlitz(f2), 2, 2, 100);
  REQUIRE(b.psi.size() == 2);
  MPoly x = MPoly::variable(f2, 1, 0);
  CHECK(b.psi[0] == x);
  CHECK(b.psi[1] == x.scaled(rf(f2, "T")) + x * x);
  CHECK(b.index[1] == PsiIndex{0, 1, 1});

  auto id = psi_build(carlitz(f2), 1, 3, 100);
  CHECK(id.psi.size() == 2);
  CHECK(id.psi[1] == x * x);

  auto diag = psi_build(diagonal_12(f2), 2, 2, 100);
  MPoly x1 = MPoly::variable(f2, 2, 0), x2 = MPoly::variable(f2, 2, 1);
  CHECK(diag.psi[2] == x1 * x1);
  CHECK(diag.psi[3] == x2 * x2 * x2 * x2);

  // Psi_{i,n,1} has the total degree of F^n and Psi_{i,n,j} is its j-th power.
  auto t2 = op_from(f2, 2, 2, {{{"T", "1"}, {"0", "T"}}, {{"0", "0"}, {"1", "0"}}});
  auto pb = psi_build(t2, 4, 3, 100);
  IterateCache cache(t2);
  for (std::size_t k = 0; k < pb.psi.size(); ++k) {
    const auto& ix = pb.index[k];
    if (ix.j == 1) {
      CHECK(pb.psi[k].total_degree() <= degrees(cache.get(ix.n)).total_degree);
    } else {
      CHECK(pb.psi[k] == pb.psi[k - 1] * pb.psi[k - ix.j + 1]);
    }
  }
  CHECK_THROWS_AS(psi_build(carlitz(f2), 0, 2, 10), std::invalid_argument);
}

TEST_CASE("rank over K") {
  auto f3 = FqCtx::prime(3);
  MPoly x = MPoly::variable(f3, 2, 0), y = MPoly::variable(f3, 2, 1);
  RatFunc t = rf(f3, "T"), inv = rf(f3, "1/(T+1)");
  CHECK(rank_over_k({x, y, x + y}) == 2);
  CHECK(rank_over_k({x.scaled(t) + y, x + y.scaled(rf(f3, "1/T"))}) == 1);
  CHECK(rank_over_k({x.scaled(inv) + y * y, x * y, y * y.scaled(t) + x.scaled(rf(f3, "T/(T+1)"))}) == 2);
  CHECK(rank_over_k({MPoly(f3, 2), x}) == 1);
}

TEST_CASE("diagonal products match the exponent-tuple count") {
  auto f2 = FqCtx::prime(2);
  for (std::size_t big_n = 1; big_n <= 3; ++big_n) {
    for (std::size_t big_l = 1; big_l <= 3; ++big_l) {
      auto b = psi_build(diagonal_12(f2), big_n, big_l, 1000);
      auto res = span_dimension(b);
      const std::size_t oracle = subset_sums(2, big_n, big_l).size() * subset_sums(4, big_n, big_l).size();
      CHECK(res.dim == oracle);
      CHECK_FALSE(res.lower_bound);
    }
  }
}

TEST_CASE("invertible top coefficient fills all low monomials") {
  for (std::uint32_t p : {2u, 3u}) {
    auto ctx = FqCtx::prime(p);
    for (std::size_t big_n = 1; big_n <= 3; ++big_n) {
      // Leading monomials have degree equal to a subset sum of {j p^n}, and the
      // span fills every degree up to the largest sum.
      auto res = span_dimension(psi_build(carlitz(ctx), big_n, p, 10000));
      const auto sums = subset_sums(p, big_n, p);
      CHECK(res.dim == sums.size());
      CHECK(res.dim == *sums.rbegin() + 1);
      if (p == 2) CHECK(res.dim == std::size_t{1} << big_n);
    }
  }
  auto f2 = FqCtx::prime(2);
  auto t2 = op_from(f2, 2, 2, {{{"T", "1"}, {"0", "T"}}, {{"1", "0"}, {"0", "1"}}});
  auto res = span_dimension(psi_build(t2, 2, 2, 1000));
  CHECK(res.dim == 16);  // all monomials x1^a x2^b with a, b < 4
}

TEST_CASE("dimension is monotone and bounded by the monomial count") {
  auto f2 = FqCtx::prime(2);
  auto t2 = op_from(f2, 2, 2, {{{"T", "1"}, {"0", "T"}}, {{"0", "0"}, {"1", "0"}}});
  std::vector<std::vector<std::size_t>> dims(4, std::vector<std::size_t>(4));
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t l = 1; l <= 3; ++l) {
      auto res = span_dimension(psi_build(t2, n, l, 24));
      CHECK(res.dim <= res.counting_bound);
      dims[n][l] = res.dim;
    }
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t l = 1; l <= 3; ++l) {
      if (n > 1) CHECK(dims[n][l] >= dims[n - 1][l]);
      if (l > 1) CHECK(dims[n][l] >= dims[n][l - 1]);
    }
  CHECK(monomial_count(2, 3) == 10);
  CHECK(monomial_count(1, 7) == 8);
}

TEST_CASE("budget exhaustion is flagged") {
  auto f2 = FqCtx::prime(2);
  auto res = span_dimension(psi_build(diagonal_12(f2), 3, 3, 1000), SpanPolicy{10});
  CHECK(res.lower_bound);
  CHECK(res.products == 10);
  CHECK(res.dim <= 10);
}

TEST_CASE("kappa bracket") {
  std::vector<KappaPoint> pts{{1, 3, 100, 4, false, 2.0}, {2, 3, 100, 40, false, std::pow(40.0, 0.25)}};
  auto b = kappa_bracket(2, 4.0, true, pts);
  CHECK(b.lower == doctest::Approx(2.0));
  CHECK(b.upper == 4.0);
  CHECK(b.lower <= std::pow(2.0, 1.5));
  CHECK(std::pow(2.0, 1.5) <= b.upper);
  auto c = kappa_bracket(1, 2.0, true, {{1, 2, 10, 2, false, 2.0}, {2, 2, 10, 4, false, 2.0}});
  CHECK(c.lower == c.upper);
  CHECK(c.measured_max == 2.0);
  CHECK_THROWS_AS(kappa_bracket(1, 2.0, true, {pts[0]}), std::invalid_argument);
}
