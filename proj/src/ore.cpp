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

#include "tmlab/ore.hpp"

#include <mutex>
#include <set>
#include <stdexcept>

#include "tmlab/kernels.hpp"
#include "tmlab/linalg.hpp"

namespace tmlab {

TwistedOperator compose(const TwistedOperator& f, const TwistedOperator& g) { return kernels::parallel::compose(f, g); }

PointK evaluate(const TwistedOperator& f, const PointK& x) { return kernels::parallel::evaluate(f, x); }

IterateCache::IterateCache(TwistedOperator f) : f_(std::move(f)) {
  if (!f_.is_square()) throw std::invalid_argument("iterates need a square operator");
  iterates_.push_back(TwistedOperator::identity(f_.ctx(), f_.in_dim()));
}

const TwistedOperator& IterateCache::get(std::size_t n) {
  {
    std::shared_lock lock(mu_);
    if (n < iterates_.size()) return iterates_[n];
  }
  std::unique_lock lock(mu_);
  while (iterates_.size() <= n) {
    // F^{k+1} = F o F^k
    iterates_.push_back(compose(f_, iterates_.back()));
  }
  return iterates_[n];
}

std::size_t IterateCache::size() const {
  std::shared_lock lock(mu_);
  return iterates_.size();
}

TwistedOperator iterate(const TwistedOperator& f, std::size_t n, IterateCache* cache) {
  if (!f.is_square()) throw std::invalid_argument("iterate needs a square operator");
  if (cache) {
    if (!(cache->base() == f)) throw std::invalid_argument("iterate cache belongs to another operator");
    return cache->get(n);
  }
  TwistedOperator acc = TwistedOperator::identity(f.ctx(), f.in_dim());
  for (std::size_t i = 0; i < n; ++i) acc = compose(f, acc);
  return acc;
}

TwistedOperator apply_tpoly(const TPoly& b, const TwistedOperator& f, IterateCache* cache) {
  if (!f.is_square()) throw std::invalid_argument("apply_tpoly needs a square operator");
  if (b.p != f.ctx()->p()) throw std::invalid_argument("F_p[t] element has the wrong characteristic");
  IterateCache local(f);
  IterateCache& it = cache ? *cache : local;
  TwistedOperator acc(f.ctx(), f.out_dim(), f.in_dim());
  for (std::size_t m = 0; m < b.coeffs.size(); ++m) {
    if (b.coeffs[m] == 0) continue;
    acc = acc + it.get(m).scaled(f.ctx()->from_int(b.coeffs[m]));
  }
  return acc;
}

GammaSet gamma_set(const TwistedOperator& f, const PointK& x, std::size_t s) {
  if (!f.is_square()) throw std::invalid_argument("gamma_set needs a square operator");
  const std::uint32_t p = f.ctx()->p();
  std::vector<PointK> orbit{x};
  for (std::size_t m = 1; m <= s; ++m) orbit.push_back(evaluate(f, orbit.back()));

  std::uint64_t combos = 1;
  for (std::size_t m = 0; m <= s; ++m) {
    if (combos > (1ull << 40) / p) throw std::invalid_argument("gamma_set: too many combinations");
    combos *= p;
  }
  std::set<PointK> seen;
  std::vector<std::uint32_t> digits(s + 1, 0);
  for (std::uint64_t code = 0; code < combos; ++code) {
    std::uint64_t c = code;
    for (auto& dgt : digits) {
      dgt = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    PointK acc = PointK::zero(f.ctx(), x.dim());
    for (std::size_t m = 0; m <= s; ++m) {
      if (digits[m]) acc = acc + orbit[m].scaled(f.ctx()->from_int(digits[m]));
    }
    seen.insert(std::move(acc));
  }
  return GammaSet{std::vector<PointK>(seen.begin(), seen.end()), combos};
}

StabilityResult stability_check(const TwistedOperator& pi, const TwistedOperator& f) {
  if (pi.is_zero()) throw std::invalid_argument("stability_check needs a nonzero projection");
  if (!f.is_square() || pi.in_dim() != f.in_dim())
    throw std::invalid_argument("stability_check: dimension mismatch");
  const FqCtxPtr& ctx = f.ctx();
  const std::size_t e = pi.out_dim(), d = pi.in_dim();
  StabilityResult result;

  const TwistedOperator lhs = compose(pi, f);
  if (lhs.is_zero()) {
    result.stable = true;
    result.reduced = TwistedOperator(ctx, e, e);
    return result;
  }
  std::size_t low = 0;
  while (pi.coeffs()[low].is_zero()) ++low;
  const std::size_t top = lhs.tau_degree();
  if (top < low) {
    result.witness = "tau-degree of pi o F is below the lowest tau-degree of pi";
    return result;
  }
  const std::size_t reduced_deg = top - low;
  const std::size_t s = pi.tau_degree();
  const std::size_t neq_deg = reduced_deg + s + 1;

  // Frobenius twists Pi_k^(p^l) for every l used.
  std::vector<std::vector<KMatrix>> twisted(reduced_deg + 1);
  for (std::size_t l = 0; l <= reduced_deg; ++l)
    for (const KMatrix& m : pi.coeffs()) twisted[l].push_back(m.frobenius(l));

  std::vector<KMatrix> solved(reduced_deg + 1, KMatrix(ctx, e, e));
  for (std::size_t a = 0; a < e; ++a) {
    // Unknown index: l * e + b for F'_l[a][b].
    const std::size_t nunk = (reduced_deg + 1) * e;
    std::vector<KRow> rows;
    std::vector<RatFunc> rhs;
    std::vector<std::pair<std::size_t, std::size_t>> eq_label;
    for (std::size_t i = 0; i < neq_deg; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        KRow row(nunk, RatFunc(ctx));
        for (std::size_t l = 0; l <= std::min(i, reduced_deg); ++l) {
          const std::size_t k = i - l;
          if (k > s) continue;
          for (std::size_t b = 0; b < e; ++b) row[l * e + b] = twisted[l][k].at(b, c);
        }
        rows.push_back(std::move(row));
        rhs.push_back(i <= top ? lhs.coeffs()[i].at(a, c) : RatFunc(ctx));
        eq_label.emplace_back(i, c);
      }
    }
    KSolveResult sol = solve_linear_k(std::move(rows), std::move(rhs));
    if (!sol.solution) {
      const auto [i, c] = eq_label[sol.failing_equation];
      result.witness = "no solution for output row " + std::to_string(a) + ": coefficient of tau^" +
                       std::to_string(i) + " in column " + std::to_string(c) + " fails elimination";
      return result;
    }
    for (std::size_t l = 0; l <= reduced_deg; ++l)
      for (std::size_t b = 0; b < e; ++b) solved[l].at(a, b) = (*sol.solution)[l * e + b];
  }

  TwistedOperator reduced(ctx, e, e, std::move(solved));
  if (!(compose(reduced, pi) == lhs)) {
    result.witness = "solved operator failed exact verification";
    return result;
  }
  result.stable = true;
  result.reduced = std::move(reduced);
  return result;
}

OperatorDegrees degrees(const TwistedOperator& f) {
  const std::size_t t = f.tau_degree();
  std::uint64_t total = 1;
  const std::uint64_t p = f.ctx()->p();
  for (std::size_t i = 0; i < t; ++i) {
    if (total > (std::uint64_t{1} << 62) / p) throw std::overflow_error("total degree overflows 64 bits");
    total *= p;
  }
  return {t, total};
}

std::vector<MPoly> pullback_coordinates(const TwistedOperator& f) {
  const FqCtxPtr& ctx = f.ctx();
  const std::size_t d = f.in_dim();
  std::vector<MPoly> out(f.out_dim(), MPoly(ctx, d));
  std::uint64_t power = 1;
  for (std::size_t j = 0; j < f.coeffs().size(); ++j) {
    if (power > UINT32_MAX) throw std::overflow_error("pullback exponent exceeds 32 bits");
    for (std::size_t i = 0; i < f.out_dim(); ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const RatFunc& c = f.coeffs()[j].at(i, k);
        if (c.is_zero()) continue;
        Monomial m(d, 0);
        m[k] = static_cast<std::uint32_t>(power);
        out[i].add_term(m, c);
      }
    power *= ctx->p();
  }
  return out;
}

}  // namespace tmlab
