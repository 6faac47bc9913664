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

// Data-parallel kernels behind the public operations. Every kernel exists
// twice: `reference` is the plain serial formulation kept as the test oracle
// and benchmark baseline, `parallel` is the OpenMP version the library uses.
// Both produce identical exact results.

#include <cstdint>
#include <span>
#include <vector>

#include "tmlab/heights.hpp"
#include "tmlab/mpoly.hpp"
#include "tmlab/operator.hpp"

namespace tmlab::kernels {

/// Dense matrix over F_p, entries in [0, p).
struct FpMatrix {
  std::uint32_t p = 2;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> data;

  FpMatrix(std::uint32_t p_, std::size_t r, std::size_t c) : p(p_), rows(r), cols(c), data(r * c, 0) {}
  std::uint32_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

namespace reference {

/// (F o G) with coefficient of tau^i equal to sum_j F_j G_{i-j}^(p^j).
TwistedOperator compose(const TwistedOperator& f, const TwistedOperator& g);
PointK evaluate(const TwistedOperator& f, const PointK& x);
std::vector<HeightValue> point_heights(std::span<const PointK> points);
/// Gauss-Jordan elimination in place; returns the pivot columns.
std::vector<std::size_t> rref(FpMatrix& m);
/// Product of factors[s] over s in each subset (the empty subset gives 1).
std::vector<MPoly> subset_products(std::span<const MPoly> factors, std::span<const std::vector<std::size_t>> subsets);

}  // namespace reference

namespace parallel {

TwistedOperator compose(const TwistedOperator& f, const TwistedOperator& g);
PointK evaluate(const TwistedOperator& f, const PointK& x);
std::vector<HeightValue> point_heights(std::span<const PointK> points);
std::vector<std::size_t> rref(FpMatrix& m);
std::vector<MPoly> subset_products(std::span<const MPoly> factors, std::span<const std::vector<std::size_t>> subsets);

}  // namespace parallel

}  // namespace tmlab::kernels
