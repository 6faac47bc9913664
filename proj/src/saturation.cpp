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

#include "tmlab/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include "tmlab/kernels.hpp"

namespace tmlab {

namespace {

using Row = std::map<Monomial, FqPoly, GradedLex>;

FqPoly content(const Row& row) {
  FqPoly g(row.begin()->second.ctx());
  for (const auto& [m, c] : row) {
    g = g.is_zero() ? c.monic() : poly_gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

// Divides out the content and makes the leading coefficient monic.
void normalize(Row& row) {
  if (row.empty()) return;
  const FqPoly g = content(row);
  const FqCtx& k = g.field();
  const Fq unit = k.inv(row.rbegin()->second.lead());
  for (auto& [m, c] : row) {
    if (!g.is_one()) c = div_exact(c, g);
    if (unit != 1) c = c.scaled(unit);
  }
}

Row clear_denominators(const MPoly& f) {
  Row row;
  if (f.is_zero()) return row;
  FqPoly l = FqPoly::constant(f.ctx(), 1);
  for (const auto& [m, c] : f.terms()) l = poly_lcm(l, c.den());
  for (const auto& [m, c] : f.terms()) row.emplace(m, c.num() * div_exact(l, c.den()));
  normalize(row);
  return row;
}

// row <- (a/g) row - (b/g) pivot where a, b are the coefficients of the
// pivot's leading monomial in pivot and row.
void reduce_once(Row& row, const Row& pivot) {
  const Monomial& lead = pivot.rbegin()->first;
  const FqPoly& a = pivot.rbegin()->second;
  const FqPoly b = row.at(lead);
  const FqPoly g = poly_gcd(a, b);
  const FqPoly ra = div_exact(a, g), rb = div_exact(b, g);
  if (!ra.is_one())
    for (auto& [m, c] : row) c = c * ra;
  for (const auto& [m, c] : pivot) {
    auto it = row.find(m);
    const FqPoly term = c * rb;
    if (it == row.end()) {
      row.emplace(m, -term);
    } else {
      it->second -= term;
      if (it->second.is_zero()) row.erase(it);
    }
  }
  normalize(row);
}

struct SubsetNode {
  std::uint64_t degree;
  std::vector<std::size_t> items;  // positions in the degree-sorted list
};

struct SubsetOrder {
  bool operator()(const SubsetNode& a, const SubsetNode& b) const {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.items > b.items;
  }
};

}  // namespace

std::uint64_t monomial_count(std::size_t d, std::uint64_t cap) {
  // C(cap + d, d) computed incrementally; each prefix product is a binomial.
  unsigned __int128 r = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    r = r * (cap + k) / k;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

PsiBasis psi_build(const TwistedOperator& f, std::size_t big_n, std::size_t big_l, std::uint64_t degree_cap,
                   IterateCache* cache) {
  if (!f.is_square()) throw std::invalid_argument("psi_build needs a square operator");
  if (big_n == 0 || big_l == 0) throw std::invalid_argument("psi_build needs N, L >= 1");
  IterateCache local(f);
  IterateCache& it = cache ? *cache : local;
  PsiBasis b;
  b.ctx = f.ctx();
  b.d = f.in_dim();
  b.big_n = big_n;
  b.big_l = big_l;
  b.degree_cap = degree_cap;
  for (std::size_t n = 0; n < big_n; ++n) {
    const std::vector<MPoly> coords = pullback_coordinates(it.get(n));
    for (std::size_t i = 0; i < b.d; ++i) {
      MPoly power = coords[i];
      for (std::size_t j = 1; j < big_l; ++j) {
        if (j > 1) power = power * coords[i];
        b.index.push_back({i, n, j});
        b.psi.push_back(power);
      }
    }
  }
  return b;
}

std::size_t rank_over_k(const std::vector<MPoly>& polys) {
  std::map<Monomial, Row, GradedLex> pivots;
  for (const MPoly& f : polys) {
    Row row = clear_denominators(f);
    while (!row.empty()) {
      auto pv = pivots.find(row.rbegin()->first);
      if (pv == pivots.end()) break;
      reduce_once(row, pv->second);
    }
    if (!row.empty()) {
      Monomial lead = row.rbegin()->first;
      pivots.emplace(std::move(lead), std::move(row));
    }
  }
  return pivots.size();
}

SpanResult span_dimension(const PsiBasis& basis, const SpanPolicy& policy) {
  if (policy.max_products == 0) throw std::invalid_argument("span_dimension needs a positive budget");
  SpanResult res;
  res.counting_bound = monomial_count(basis.d, basis.degree_cap);

  // Usable factors sorted by degree; zero functions and those above the cap
  // cannot appear in a kept product.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < basis.psi.size(); ++k) {
    if (!basis.psi[k].is_zero() && basis.psi[k].total_degree() <= basis.degree_cap) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return basis.psi[a].total_degree() < basis.psi[b].total_degree();
  });
  std::vector<MPoly> factors;
  std::vector<std::uint64_t> w;
  for (std::size_t k : order) {
    factors.push_back(basis.psi[k]);
    w.push_back(basis.psi[k].total_degree());
  }

  std::vector<std::vector<std::size_t>> subsets{{}};
  std::priority_queue<SubsetNode, std::vector<SubsetNode>, SubsetOrder> heap;
  if (!w.empty()) heap.push({w[0], {0}});
  while (!heap.empty() && heap.top().degree <= basis.degree_cap) {
    if (subsets.size() >= policy.max_products) {
      res.lower_bound = true;
      break;
    }
    SubsetNode node = heap.top();
    heap.pop();
    const std::size_t k = node.items.back();
    if (k + 1 < w.size()) {
      SubsetNode add = node;
      add.items.push_back(k + 1);
      add.degree += w[k + 1];
      SubsetNode swap = node;
      swap.items.back() = k + 1;
      swap.degree = node.degree - w[k] + w[k + 1];
      heap.push(std::move(add));
      heap.push(std::move(swap));
    }
    subsets.push_back(std::move(node.items));
  }

  std::vector<MPoly> products;
  if (factors.empty()) {
    products.push_back(MPoly::constant(basis.ctx, basis.d, RatFunc::constant(basis.ctx, 1)));
  } else {
    products = kernels::parallel::subset_products(factors, subsets);
  }
  res.products = products.size();
  res.dim = rank_over_k(products);
  if (res.dim > res.counting_bound) throw std::logic_error("span dimension exceeds the monomial count");
  return res;
}

KappaBracket kappa_bracket(std::size_t d, double delta, bool delta_exact, const std::vector<KappaPoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("kappa_bracket needs at least two measurements");
  if (d == 0) throw std::invalid_argument("kappa_bracket needs d >= 1");
  KappaBracket b;
  b.lower = std::pow(delta, 1.0 / static_cast<double>(d));
  b.upper = delta;
  b.upper_is_estimate = !delta_exact;
  for (const auto& pt : points) b.measured_max = std::max(b.measured_max, pt.estimate);
  return b;
}

}  // namespace tmlab
