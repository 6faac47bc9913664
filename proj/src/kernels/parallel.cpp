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

#include <exception>
#include <mutex>
#include <stdexcept>

#include "tmlab/kernels.hpp"

namespace tmlab::kernels::parallel {

namespace {

// Exceptions must not escape an OpenMP region; the first one is rethrown
// after the loop.
class ErrorSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

}  // namespace

TwistedOperator compose(const TwistedOperator& f, const TwistedOperator& g) {
  if (f.in_dim() != g.out_dim()) throw std::invalid_argument("compose: inner dimensions differ");
  if (f.is_zero() || g.is_zero()) return TwistedOperator(f.ctx(), f.out_dim(), g.in_dim());
  const std::size_t rf = f.tau_degree(), rg = g.tau_degree();
  const std::size_t e = f.out_dim(), mid = f.in_dim(), d = g.in_dim();
  const std::size_t ncoef = rf + rg + 1;
  std::vector<KMatrix> out(ncoef, KMatrix(f.ctx(), e, d));

  // One task per output entry (i, r, c).
  const std::int64_t tasks = static_cast<std::int64_t>(ncoef * e * d);
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    err.run([&] {
      const std::size_t i = static_cast<std::size_t>(t) / (e * d);
      const std::size_t r = (static_cast<std::size_t>(t) / d) % e;
      const std::size_t c = static_cast<std::size_t>(t) % d;
      RatFunc acc(f.ctx());
      const std::size_t jlo = i > rg ? i - rg : 0;
      for (std::size_t j = jlo; j <= std::min(i, rf); ++j) {
        const KMatrix& fj = f.coeffs()[j];
        const KMatrix& gk = g.coeffs()[i - j];
        for (std::size_t k = 0; k < mid; ++k) {
          const RatFunc& a = fj.at(r, k);
          if (a.is_zero()) continue;
          const RatFunc& b = gk.at(k, c);
          if (b.is_zero()) continue;
          acc += a * b.frobenius(j);
        }
      }
      out[i].at(r, c) = std::move(acc);
    });
  }
  err.rethrow();
  return TwistedOperator(f.ctx(), e, d, std::move(out));
}

PointK evaluate(const TwistedOperator& f, const PointK& x) {
  if (f.in_dim() != x.dim()) throw std::invalid_argument("evaluate: point has wrong dimension");
  const std::size_t n = f.coeffs().size();
  std::vector<PointK> twisted(n);
  for (std::size_t i = 0; i < n; ++i) twisted[i] = x.frobenius(i);
  PointK out = PointK::zero(f.ctx(), f.out_dim());
  const std::int64_t rows = static_cast<std::int64_t>(f.out_dim());
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < rows; ++r) {
    err.run([&] {
      RatFunc acc(f.ctx());
      for (std::size_t i = 0; i < n; ++i) {
        const KMatrix& a = f.coeffs()[i];
        for (std::size_t c = 0; c < f.in_dim(); ++c) {
          const RatFunc& coef = a.at(static_cast<std::size_t>(r), c);
          if (!coef.is_zero() && !twisted[i].coords[c].is_zero()) acc += coef * twisted[i].coords[c];
        }
      }
      out.coords[static_cast<std::size_t>(r)] = std::move(acc);
    });
  }
  err.rethrow();
  return out;
}

std::vector<HeightValue> point_heights(std::span<const PointK> points) {
  std::vector<HeightValue> out(points.size());
  const std::int64_t n = static_cast<std::int64_t>(points.size());
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    err.run([&] { out[static_cast<std::size_t>(i)] = height_tuple(points[static_cast<std::size_t>(i)].coords); });
  }
  err.rethrow();
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
  const std::size_t cols = m.cols;
  for (std::size_t col = 0; col < cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    std::uint32_t* prow = &m.data[row * cols];
    if (sel != row) std::swap_ranges(prow, prow + cols, &m.data[sel * cols]);
    const std::uint32_t s = inv(prow[col]);
    for (std::size_t c = col; c < cols; ++c) prow[c] = static_cast<std::uint32_t>(std::uint64_t{prow[c]} * s % p);
    const std::int64_t nrows = static_cast<std::int64_t>(m.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < nrows; ++r) {
      if (static_cast<std::size_t>(r) == row) continue;
      std::uint32_t* target = &m.data[static_cast<std::size_t>(r) * cols];
      const std::uint32_t factor = target[col];
      if (factor == 0) continue;
      const std::uint64_t nf = p - factor;
      // Columns left of `col` are already zero in the pivot row.
      for (std::size_t c = col; c < cols; ++c) {
        if (prow[c]) target[c] = static_cast<std::uint32_t>((target[c] + nf * prow[c]) % p);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<MPoly> subset_products(std::span<const MPoly> factors, std::span<const std::vector<std::size_t>> subsets) {
  if (subsets.empty()) return {};
  if (factors.empty()) throw std::invalid_argument("subset_products needs at least one factor");
  const MPoly one = MPoly::constant(factors[0].ctx(), factors[0].nvars(), RatFunc::constant(factors[0].ctx(), 1));
  std::vector<MPoly> out(subsets.size(), one);
  const std::int64_t n = static_cast<std::int64_t>(subsets.size());
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    err.run([&] {
      MPoly acc = one;
      for (std::size_t idx : subsets[static_cast<std::size_t>(i)]) acc = acc * factors[idx];
      out[static_cast<std::size_t>(i)] = std::move(acc);
    });
  }
  err.rethrow();
  return out;
}

}  // namespace tmlab::kernels::parallel
