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

#include "tmlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tmlab/kernels.hpp"

namespace tmlab {

namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

// a * b, saturating at INT64_MAX for nonnegative inputs.
std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::int64_t sat_add(std::int64_t a, std::int64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::int64_t sat_pow(std::int64_t base, std::size_t e) {
  std::int64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r = sat_mul(r, base);
  return r;
}

std::int64_t tau_or_minus_one(const TwistedOperator& f) {
  return f.is_zero() ? -1 : static_cast<std::int64_t>(f.tau_degree());
}

// Root estimates p^{t(n)/n}, plus the progression of the tau-degrees.
void fill_degree_estimates(GrowthReport& rep) {
  std::vector<std::int64_t> t;
  for (const auto& row : rep.rows) {
    if (row.tau_degree < 0) break;
    t.push_back(row.tau_degree);
  }
  for (auto& row : rep.rows) {
    if (row.n > 0 && row.tau_degree >= 0)
      row.root_estimate = std::pow(static_cast<double>(rep.p), static_cast<double>(row.tau_degree) / row.n);
  }
  if (t.size() == rep.rows.size()) rep.exact_rate = detect_progression(t);
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / (g ? g : 1), den / (g ? g : 1)};
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::int64_t Progression::predict(std::span<const std::int64_t> t, std::size_t n) const {
  if (n < t.size()) return t[n];
  const std::size_t last = t.size() - 1;
  const std::size_t k = (n - last + period - 1) / period;
  const std::size_t m = n - k * period;
  return t[m] + step * static_cast<std::int64_t>(k);
}

std::optional<Progression> detect_progression(std::span<const std::int64_t> t, std::size_t min_periods) {
  if (t.size() < 2 || min_periods == 0) return std::nullopt;
  const std::size_t last = t.size() - 1;
  for (std::size_t period = 1; period * min_periods <= last; ++period) {
    const std::int64_t step = t[last] - t[last - period];
    std::size_t offset = last - period;
    while (offset > 0 && t[offset - 1 + period] - t[offset - 1] == step) --offset;
    if (last - offset >= min_periods * period) {
      return Progression{offset, period, step, Rational::make(step, static_cast<std::int64_t>(period))};
    }
  }
  return std::nullopt;
}

std::optional<double> GrowthReport::delta() const {
  if (!exact_rate) return std::nullopt;
  return std::pow(static_cast<double>(p), exact_rate->rate.value());
}

HeightValue operator_height(const TwistedOperator& f) {
  std::vector<RatFunc> all;
  for (const auto& m : f.coeffs())
    for (const auto& e : m.entries())
      if (!e.is_zero()) all.push_back(e);
  return height_tuple(all);
}

std::vector<PointK> orbit(const TwistedOperator& f, const PointK& x, std::size_t n) {
  if (!f.is_square()) throw std::invalid_argument("orbit needs a square operator");
  if (f.in_dim() != x.dim()) throw std::invalid_argument("orbit: point has wrong dimension");
  std::vector<PointK> out{x};
  out.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) out.push_back(evaluate(f, out.back()));
  return out;
}

GrowthReport dynamic_degree(const TwistedOperator& f, std::size_t n_max, IterateCache* cache) {
  if (!f.is_square()) throw std::invalid_argument("dynamic_degree needs a square operator");
  if (f.is_zero()) throw std::invalid_argument("dynamic_degree needs a nonzero operator");
  IterateCache local(f);
  IterateCache& it = cache ? *cache : local;
  GrowthReport rep;
  rep.p = f.ctx()->p();
  rep.q = f.ctx()->q();
  for (std::size_t n = 0; n <= n_max; ++n) {
    const TwistedOperator& fn = it.get(n);
    GrowthRow row;
    row.n = n;
    row.tau_degree = tau_or_minus_one(fn);
    row.coeff_height = operator_height(fn).value;
    rep.rows.push_back(row);
  }
  fill_degree_estimates(rep);
  return rep;
}

GrowthReport restricted_degree(const TwistedOperator& f, const TwistedOperator& lambda, std::size_t n_max) {
  if (!f.is_square()) throw std::invalid_argument("restricted_degree needs a square operator");
  if (lambda.in_dim() != f.out_dim()) throw std::invalid_argument("restricted_degree: lambda has wrong width");
  GrowthReport rep;
  rep.p = f.ctx()->p();
  rep.q = f.ctx()->q();
  TwistedOperator cur = lambda;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) cur = compose(cur, f);
    GrowthRow row;
    row.n = n;
    row.tau_degree = tau_or_minus_one(cur);
    row.coeff_height = operator_height(cur).value;
    rep.rows.push_back(row);
  }
  fill_degree_estimates(rep);
  return rep;
}

GrowthReport arithmetic_degree(const TwistedOperator& f, const PointK& x, const TwistedOperator* lambda,
                               std::size_t n_max, std::optional<double> delta) {
  if (!f.is_square()) throw std::invalid_argument("arithmetic_degree needs a square operator");
  if (lambda && lambda->in_dim() != f.out_dim())
    throw std::invalid_argument("arithmetic_degree: lambda has wrong width");
  const std::vector<PointK> pts = orbit(f, x, n_max);
  std::vector<PointK> observed;
  observed.reserve(pts.size());
  for (const auto& pt : pts) observed.push_back(lambda ? evaluate(*lambda, pt) : pt);
  const std::vector<HeightValue> hs = kernels::parallel::point_heights(observed);
  const std::int64_t hp = height_tuple(x.coords).value;
  const std::int64_t p = f.ctx()->p();

  GrowthReport rep;
  rep.p = f.ctx()->p();
  rep.q = f.ctx()->q();
  TwistedOperator cur = lambda ? *lambda : TwistedOperator::identity(f.ctx(), f.in_dim());
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) cur = compose(cur, f);
    GrowthRow row;
    row.n = n;
    row.tau_degree = tau_or_minus_one(cur);
    row.height = hs[n].value;
    row.coeff_height = operator_height(cur).value;
    const std::int64_t twist = row.tau_degree < 0 ? 0 : sat_pow(p, static_cast<std::size_t>(row.tau_degree));
    row.window_bound = cur.is_zero() ? 0 : sat_add(*row.coeff_height, sat_mul(twist, hp));
    if (row.height > *row.window_bound) ++rep.window_violations;
    if (n > 0) row.root_estimate = std::pow(static_cast<double>(row.height), 1.0 / static_cast<double>(n));
    if (n > 0 && hs[n - 1].value > 0)
      row.ratio_estimate = static_cast<double>(row.height) / static_cast<double>(hs[n - 1].value);
    if (delta) row.proxy = static_cast<double>(row.height) / std::pow(*delta, static_cast<double>(n));
    rep.rows.push_back(row);
  }
  std::vector<std::int64_t> t;
  for (const auto& row : rep.rows) t.push_back(row.tau_degree);
  if (std::all_of(t.begin(), t.end(), [](std::int64_t v) { return v >= 0; })) rep.exact_rate = detect_progression(t);
  const std::size_t from = (2 * n_max) / 3;
  rep.heights_bounded = n_max >= 2 && std::all_of(rep.rows.begin() + static_cast<std::ptrdiff_t>(from), rep.rows.end(),
                                                  [&](const GrowthRow& r) { return r.height == rep.rows[from].height; });
  return rep;
}

TruncboundResult truncbound_check(const TwistedOperator& f, std::size_t n_max, double s, double s_plus,
                                  IterateCache* cache) {
  if (!(s >= 1.0 && s < s_plus)) throw std::invalid_argument("truncbound_check needs 1 <= s < s_plus");
  if (!f.is_square()) throw std::invalid_argument("truncbound_check needs a square operator");
  IterateCache local(f);
  IterateCache& it = cache ? *cache : local;
  TruncboundResult res;
  res.constant = operator_height(f).value;
  const std::int64_t p = f.ctx()->p();
  for (std::size_t n = 1; n <= n_max; ++n) {
    const TwistedOperator& fn = it.get(n);
    TruncboundResult::LowTwistRow row{n, 0, std::pow(s_plus, static_cast<double>(n))};
    const double s_power = std::pow(s, static_cast<double>(n));
    for (std::size_t i = 0; i < fn.coeffs().size(); ++i) {
      const std::int64_t h = height_tuple(fn.coeffs()[i].entries()).value;
      const std::int64_t pi = sat_pow(p, i);
      const std::int64_t bound = sat_mul(sat_mul(res.constant, static_cast<std::int64_t>(n)), pi);
      if (h > bound) {
        res.holds = false;
        ++res.violations;
      }
      res.margin = std::max(res.margin, static_cast<double>(h) / (static_cast<double>(n) * static_cast<double>(pi)));
      res.rows.push_back({n, i, h, bound});
      if (static_cast<double>(pi) <= s_power) row.max_height = std::max(row.max_height, h);
    }
    res.low_twist_rows.push_back(row);
  }
  return res;
}

FqPoly residue(const RatFunc& a, const Place& v) {
  const FqCtxPtr& ctx = a.ctx();
  if (a.is_zero()) return FqPoly(ctx);
  if (v.is_infinite()) {
    const std::int64_t dn = a.num().degree(), dd = a.den().degree();
    if (dn > dd) throw IntegralityError("element has a pole at infinity");
    if (dn < dd) return FqPoly(ctx);
    return FqPoly::constant(ctx, ctx->div(a.num().lead(), a.den().lead()));
  }
  const FqPoly den = rem(a.den(), v.poly());
  if (den.is_zero()) throw IntegralityError("element has a pole at " + v.to_string());
  const FqPoly num = rem(a.num(), v.poly());
  if (v.poly().degree() == 1) return FqPoly::constant(ctx, ctx->div(num.constant_term(), den.constant_term()));
  return rem(num * inverse_mod(den, v.poly()), v.poly());
}

ReductionReport reduce_and_shift(const TwistedOperator& f, const PointK& x, const Place& v) {
  if (!f.is_square() || f.in_dim() != x.dim()) throw std::invalid_argument("reduce_and_shift: dimension mismatch");
  const FqCtxPtr& ctx = f.ctx();
  const std::size_t d = x.dim();
  auto reduce = [&](const FqPoly& g) { return v.is_infinite() ? g : rem(g, v.poly()); };

  // Reduced map on G_a^d(k(v)).
  std::vector<std::vector<FqPoly>> res_coeffs;
  for (const auto& m : f.coeffs()) {
    std::vector<FqPoly> rm;
    for (const auto& e : m.entries()) rm.push_back(residue(e, v));
    res_coeffs.push_back(std::move(rm));
  }
  std::vector<FqPoly> cur;
  for (const auto& c : x.coords) cur.push_back(residue(c, v));

  ReductionReport rep{v, {}, 0, 0, 0, PointK::zero(ctx, d), false};
  const std::uint64_t k = v.residue_field_size();
  std::uint64_t bound = 1;
  for (std::size_t i = 0; i < d; ++i) bound = bound > UINT64_MAX / k ? UINT64_MAX : bound * k;
  rep.pigeonhole_bound = bound == UINT64_MAX ? bound : bound + 1;

  auto key_less = [](const std::vector<FqPoly>& a, const std::vector<FqPoly>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  std::map<std::vector<FqPoly>, std::size_t, decltype(key_less)> seen(key_less);
  for (std::size_t n = 0;; ++n) {
    auto [pos, fresh] = seen.emplace(cur, n);
    rep.residues.push_back(cur);
    if (!fresh) {
      rep.s1 = pos->second;
      rep.s2 = n;
      break;
    }
    if (n >= rep.pigeonhole_bound) throw std::logic_error("residue orbit exceeded the pigeonhole bound");
    std::vector<FqPoly> next(d, FqPoly(ctx));
    for (std::size_t i = 0; i < res_coeffs.size(); ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        if (cur[c].is_zero()) continue;
        const FqPoly tw = reduce(cur[c].frobenius(i));
        for (std::size_t r = 0; r < d; ++r) {
          const FqPoly& a = res_coeffs[i][r * d + c];
          if (!a.is_zero()) next[r] = next[r] + a * tw;
        }
      }
    }
    for (auto& e : next) e = reduce(e);
    cur = std::move(next);
  }
  const std::vector<PointK> pts = orbit(f, x, rep.s2);
  rep.shifted = pts[rep.s2] - pts[rep.s1];
  rep.verified = std::all_of(rep.shifted.coords.begin(), rep.shifted.coords.end(),
                             [&](const RatFunc& c) { return valuation(c, v) >= 1; });
  return rep;
}

const char* PreperiodicityResult::name(Kind k) {
  switch (k) {
    case Kind::preperiodic:
      return "preperiodic";
    case Kind::escaping:
      return "escaping";
    default:
      return "inconclusive";
  }
}

PreperiodicityResult preperiodicity_probe(const TwistedOperator& f, const PointK& x, std::size_t n_max,
                                          std::int64_t height_cap) {
  if (!f.is_square() || f.in_dim() != x.dim()) throw std::invalid_argument("preperiodicity_probe: dimension mismatch");
  PreperiodicityResult res;
  std::map<PointK, std::size_t> seen;
  PointK cur = x;
  for (std::size_t n = 0; n <= n_max; ++n) {
    res.heights.push_back(height_tuple(cur.coords).value);
    auto [pos, fresh] = seen.emplace(cur, n);
    if (!fresh) {
      res.kind = PreperiodicityResult::Kind::preperiodic;
      res.preperiod = pos->second;
      res.period = n - pos->second;
      return res;
    }
    const auto& h = res.heights;
    if (h.back() > height_cap) {
      bool rising = true;
      for (std::size_t k = n > 3 ? n - 3 : 0; k < n; ++k) rising = rising && h[k] < h[k + 1];
      if (rising) {
        res.kind = PreperiodicityResult::Kind::escaping;
        res.escape_index = n;
        return res;
      }
    }
    if (n < n_max) cur = evaluate(f, cur);
  }
  return res;
}

}  // namespace tmlab
