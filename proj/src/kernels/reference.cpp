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

#include <stdexcept>

#include "tmlab/kernels.hpp"

namespace tmlab::kernels::reference {

TwistedOperator compose(const TwistedOperator& f, const TwistedOperator& g) {
  if (f.in_dim() != g.out_dim()) throw std::invalid_argument("compose: inner dimensions differ");
  if (f.is_zero() || g.is_zero()) return TwistedOperator(f.ctx(), f.out_dim(), g.in_dim());
  const std::size_t rf = f.tau_degree(), rg = g.tau_degree();
  std::vector<KMatrix> out(rf + rg + 1, KMatrix(f.ctx(), f.out_dim(), g.in_dim()));
  for (std::size_t j = 0; j <= rf; ++j) {
    for (std::size_t k = 0; k <= rg; ++k) {
      out[j + k] = out[j + k] + f.coeffs()[j] * g.coeffs()[k].frobenius(j);
    }
  }
  return TwistedOperator(f.ctx(), f.out_dim(), g.in_dim(), std::move(out));
}

PointK evaluate(const TwistedOperator& f, const PointK& x) {
  if (f.in_dim() != x.dim()) throw std::invalid_argument("evaluate: point has wrong dimension");
  PointK out = PointK::zero(f.ctx(), f.out_dim());
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    const PointK xi = x.frobenius(i);
    const KMatrix& a = f.coeffs()[i];
    for (std::size_t r = 0; r < f.out_dim(); ++r)
      for (std::size_t c = 0; c < f.in_dim(); ++c) out.coords[r] += a.at(r, c) * xi.coords[c];
  }
  return out;
}

std::vector<HeightValue> point_heights(std::span<const PointK> points) {
  std::vector<HeightValue> out;
  out.reserve(points.size());
  for (const PointK& pt : points) out.push_back(height_tuple(pt.coords));
  return out;
}

std::vector<std::size_t> rref(FpMatrix& m) {
  const std::uint32_t p = m.p;
  auto inv = [p](std::uint32_t a) {
    std::uint64_t r = 1, b = a;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
    }
    return static_cast<std::uint32_t>(r);
  };
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(row, c));
    const std::uint32_t s = inv(m.at(row, col));
    for (std::size_t c = 0; c < m.cols; ++c) m.at(row, c) = static_cast<std::uint32_t>(std::uint64_t{m.at(row, c)} * s % p);
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      const std::uint32_t factor = m.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = 0; c < m.cols; ++c) {
        m.at(r, c) = static_cast<std::uint32_t>((m.at(r, c) + std::uint64_t{p - factor} * m.at(row, c)) % p);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<MPoly> subset_products(std::span<const MPoly> factors, std::span<const std::vector<std::size_t>> subsets) {
  std::vector<MPoly> out;
  if (subsets.empty()) return out;
  if (factors.empty()) throw std::invalid_argument("subset_products needs at least one factor");
  const MPoly one = MPoly::constant(factors[0].ctx(), factors[0].nvars(), RatFunc::constant(factors[0].ctx(), 1));
  out.reserve(subsets.size());
  for (const auto& s : subsets) {
    MPoly acc = one;
    for (std::size_t idx : s) acc = acc * factors[idx];
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace tmlab::kernels::reference
