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
#include <optional>
#include <vector>

#include "tmlab/mpoly.hpp"
#include "tmlab/ore.hpp"

namespace tmlab {

/// Index (i, n, j) of Psi_{i,n,j} = ((F^n)^* m_i)^j, zero-based in i.
struct PsiIndex {
  std::size_t i;
  std::size_t n;
  std::size_t j;
  friend bool operator==(const PsiIndex&, const PsiIndex&) = default;
};

struct PsiBasis {
  FqCtxPtr ctx;
  std::size_t d = 0;
  std::size_t big_n = 0;  // N
  std::size_t big_l = 0;  // L
  std::uint64_t degree_cap = 0;
  std::vector<PsiIndex> index;  // 0 <= i < d, 0 <= n < N, 1 <= j < L
  std::vector<MPoly> psi;       // aligned with index
};

/// Materializes every Psi_{i,n,j}. Throws std::invalid_argument unless F is
/// square and N, L >= 1.
PsiBasis psi_build(const TwistedOperator& f, std::size_t big_n, std::size_t big_l, std::uint64_t degree_cap,
                   IterateCache* cache = nullptr);

/// Subsets of the index set are enumerated by nondecreasing total degree of
/// their product (the empty subset first) until the degree cap or the
/// product budget is reached.
struct SpanPolicy {
  std::size_t max_products = 200000;
};

struct SpanResult {
  std::size_t dim = 0;
  std::size_t products = 0;    // products generated, including the empty one
  bool lower_bound = false;    // the budget stopped the enumeration early
  std::uint64_t counting_bound = 0;  // monomials of degree <= cap, saturated
};

/// Rank over K of the products of subsets of the basis with degree at most
/// the cap. Throws std::logic_error if the rank exceeds the monomial count.
SpanResult span_dimension(const PsiBasis& basis, const SpanPolicy& policy = {});

/// Rank over K of a list of polynomials by fraction-free sparse elimination
/// over F_q[T]: rows are cleared of denominators and content, and reduced
/// against pivots keyed by their leading monomial in graded order.
std::size_t rank_over_k(const std::vector<MPoly>& polys);

/// Number of monomials in d variables of total degree <= cap, saturated.
std::uint64_t monomial_count(std::size_t d, std::uint64_t cap);

struct KappaPoint {
  std::size_t big_n = 0;
  std::size_t big_l = 0;
  std::uint64_t degree_cap = 0;
  std::size_t dim = 0;
  bool lower_bound = false;
  double estimate = 0.0;  // dim^{1/(dN)}
};

struct KappaBracket {
  double lower = 1.0;   // delta^{1/d}
  double upper = 1.0;   // delta
  bool upper_is_estimate = false;
  double measured_max = 0.0;  // best dim^{1/(dN)}
};

/// The certified interval [delta^{1/d}, delta] for the saturation degree,
/// with the best measured estimate reported beside it. Throws
/// std::invalid_argument with fewer than two measurements.
KappaBracket kappa_bracket(std::size_t d, double delta, bool delta_exact, const std::vector<KappaPoint>& points);

}  // namespace tmlab
