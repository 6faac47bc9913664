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
#include "tmlab/kernels.hpp"

using namespace tmlab;
using tmlab::testing::random_operator;
using tmlab::testing::random_point;

TEST_CASE("composition and evaluation kernels agree") {
  std::mt19937_64 rng(31);
  for (auto ctx : {FqCtx::prime(2), FqCtx::prime(3), FqCtx::make(3, {1, 0, 1})}) {
    for (int it = 0; it < 10; ++it) {
      const std::size_t d = 1 + rng() % 4;
      auto f = random_operator(ctx, rng, d, d, rng() % 3, 3);
      auto g = random_operator(ctx, rng, d, d, rng() % 3, 3);
      auto x = random_point(ctx, rng, d, 3);
      CHECK(kernels::reference::compose(f, g) == kernels::parallel::compose(f, g));
      CHECK(kernels::reference::evaluate(f, x) == kernels::parallel::evaluate(f, x));
    }
  }
}

TEST_CASE("height kernels agree") {
  std::mt19937_64 rng(32);
  auto f2 = FqCtx::prime(2);
  std::vector<PointK> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(random_point(f2, rng, 3, 6));
  CHECK(kernels::reference::point_heights(pts) == kernels::parallel::point_heights(pts));
}

TEST_CASE("row reduction kernels agree") {
  std::mt19937_64 rng(33);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    for (int it = 0; it < 20; ++it) {
      kernels::FpMatrix m(p, 1 + rng() % 12, 1 + rng() % 15);
      for (auto& v : m.data) v = static_cast<std::uint32_t>(rng() % p);
      if (it % 3 == 0)
        for (std::size_t c = 0; c < m.cols; ++c) m.at(m.rows - 1, c) = m.at(0, c);
      kernels::FpMatrix a = m, b = m;
      auto pa = kernels::reference::rref(a);
      auto pb = kernels::parallel::rref(b);
      CHECK(pa == pb);
      CHECK(a.data == b.data);
      for (std::size_t r = 0; r < pa.size(); ++r) CHECK(a.at(r, pa[r]) == 1);
    }
  }
}

TEST_CASE("subset product kernels agree") {
  auto f3 = FqCtx::prime(3);
  std::mt19937_64 rng(34);
  std::vector<MPoly> factors;
  for (std::size_t i = 0; i < 2; ++i) {
    MPoly x = MPoly::variable(f3, 2, i);
    factors.push_back(x + x * x.scaled(testing::rf(f3, "T")));
  }
  factors.push_back(factors[0] * factors[1]);
  std::vector<std::vector<std::size_t>> subsets{{}, {0}, {1, 2}, {0, 1, 2}};
  auto a = kernels::reference::subset_products(factors, subsets);
  auto b = kernels::parallel::subset_products(factors, subsets);
  CHECK(a == b);
  CHECK(a[0] == MPoly::constant(f3, 2, testing::rf(f3, "1")));
  CHECK(a[2] == factors[1] * factors[2]);
  std::vector<MPoly> none;
  CHECK_THROWS_AS(kernels::parallel::subset_products(none, subsets), std::invalid_argument);
  CHECK_THROWS_AS(kernels::reference::subset_products(none, subsets), std::invalid_argument);
}
