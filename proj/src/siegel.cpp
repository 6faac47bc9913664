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

#include "tmlab/siegel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "tmlab/kernels.hpp"
#include "tmlab/saturation.hpp"

namespace tmlab {

namespace {

BigRational rpow(const BigRational& x, std::uint64_t e) {
  BigRational r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= x;
  return r;
}

// p^e for a possibly negative integer e.
BigRational ppow(std::uint32_t p, std::int64_t e) {
  BigRational r = rpow(BigRational(p), static_cast<std::uint64_t>(e < 0 ? -e : e));
  return e < 0 ? BigRational(1) / r : r;
}

BigInt ceil_of(const BigRational& x) {
  const BigInt n = boost::multiprecision::numerator(x), d = boost::multiprecision::denominator(x);
  BigInt q = n / d;
  if (q * d < n) ++q;
  return q;
}

double to_double(const BigRational& x) { return static_cast<double>(x); }

// p^c > (d+ * delta_lambda^d)^d, after raising both sides to the power
// den(c) * den(exponent of delta_lambda).
bool finas_holds(const BigRational& c, const BigRational& delta_plus, const PowerOfP& dl, std::size_t d) {
  const BigInt cn = boost::multiprecision::numerator(c), cd = boost::multiprecision::denominator(c);
  const std::int64_t a = dl.exponent.num, b = dl.exponent.den;
  const std::int64_t cn64 = static_cast<std::int64_t>(cn), cd64 = static_cast<std::int64_t>(cd);
  const std::int64_t e = cn64 * b - a * static_cast<std::int64_t>(d * d) * cd64;
  const BigRational lhs = ppow(dl.p, e);
  const BigRational rhs = rpow(delta_plus, static_cast<std::uint64_t>(static_cast<std::int64_t>(d) * cd64 * b));
  return lhs > rhs;
}

// d2 > d4^{d+1+c}.
bool epsa_holds(const BigRational& d2, const BigRational& d4, const BigRational& c, std::size_t d) {
  const BigRational e = BigRational(static_cast<long long>(d) + 1) + c;
  const BigInt en = boost::multiprecision::numerator(e), ed = boost::multiprecision::denominator(e);
  return rpow(d2, static_cast<std::uint64_t>(ed)) > rpow(d4, static_cast<std::uint64_t>(en));
}

Fq basis_element(const FqCtx& k, std::uint32_t mu) {
  std::vector<std::uint32_t> dg(k.m(), 0);
  dg[mu] = 1;
  return k.from_digits(dg);
}

}  // namespace

LinSysA LinSysA::zeros(const FqCtxPtr& ctx, std::size_t rows, std::size_t cols, std::uint64_t bound) {
  return LinSysA{ctx, rows, cols, std::vector<FqPoly>(rows * cols, FqPoly(ctx)), bound};
}

SiegelResult siegel_solve(const LinSysA& sys) {
  if (sys.entries.size() != sys.rows * sys.cols) throw std::invalid_argument("siegel_solve: malformed system");
  const FqCtx& k = *sys.ctx;
  const std::uint32_t m = k.m(), p = k.p();
  const std::uint64_t nb = sys.bound + 1;
  std::int64_t max_deg = 0;
  for (const auto& e : sys.entries) max_deg = std::max(max_deg, e.degree());
  const std::uint64_t nexp = static_cast<std::uint64_t>(max_deg) + nb;

  SiegelResult res;
  res.unknowns = sys.cols * nb * m;
  res.equations = sys.rows * nexp * m;
  if (res.unknowns == 0) return res;
  if (res.equations > 50'000'000 / std::max<std::size_t>(res.unknowns, 1))
    throw std::invalid_argument("siegel_solve: linearized system too large");

  std::vector<Fq> basis(m);
  for (std::uint32_t mu = 0; mu < m; ++mu) basis[mu] = basis_element(k, mu);
  kernels::FpMatrix mat(p, res.equations, res.unknowns);
  for (std::size_t r = 0; r < sys.rows; ++r) {
    for (std::size_t j = 0; j < sys.cols; ++j) {
      for (const Term& t : sys.at(r, j).terms()) {
        for (std::uint64_t b = 0; b < nb; ++b) {
          for (std::uint32_t mu = 0; mu < m; ++mu) {
            const auto dg = k.digits(k.mul(t.coeff, basis[mu]));
            const std::size_t col = (j * nb + b) * m + mu;
            for (std::uint32_t nu = 0; nu < m; ++nu) {
              if (dg[nu] == 0) continue;
              const std::size_t row = (r * nexp + t.exp + b) * m + nu;
              mat.at(row, col) = (mat.at(row, col) + dg[nu]) % p;
            }
          }
        }
      }
    }
  }
  const std::vector<std::size_t> pivots = kernels::parallel::rref(mat);
  res.rank = pivots.size();
  std::vector<bool> is_pivot(res.unknowns, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (free_col < res.unknowns && is_pivot[free_col]) ++free_col;
  if (free_col == res.unknowns) return res;

  std::vector<std::uint32_t> x(res.unknowns, 0);
  x[free_col] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = (p - mat.at(r, free_col)) % p;

  std::vector<FqPoly> c;
  for (std::size_t j = 0; j < sys.cols; ++j) {
    std::vector<Fq> dense(nb, 0);
    for (std::uint64_t b = 0; b < nb; ++b) {
      std::vector<std::uint32_t> dg(m);
      for (std::uint32_t mu = 0; mu < m; ++mu) dg[mu] = x[(j * nb + b) * m + mu];
      dense[b] = k.from_digits(dg);
    }
    c.push_back(FqPoly::from_dense(sys.ctx, dense));
  }
  for (std::size_t r = 0; r < sys.rows; ++r) {
    FqPoly acc(sys.ctx);
    for (std::size_t j = 0; j < sys.cols; ++j) acc += sys.at(r, j) * c[j];
    if (!acc.is_zero()) throw std::logic_error("siegel_solve: kernel vector failed substitution");
  }
  res.solution = std::move(c);
  return res;
}

SiegelSweep siegel_sweep(LinSysA sys, std::uint64_t max_bound) {
  SiegelSweep sw;
  std::vector<RatFunc> tuple;
  for (const auto& e : sys.entries)
    if (!e.is_zero()) tuple.emplace_back(e);
  sw.system_height = height_tuple(tuple).value;
  const double mm = static_cast<double>(sys.rows), ll = static_cast<double>(sys.cols);
  sw.dirichlet_prediction =
      ll > mm ? mm * static_cast<double>(sw.system_height) / (ll - mm) : std::numeric_limits<double>::infinity();
  for (std::uint64_t b = 0; b <= max_bound; ++b) {
    sys.bound = b;
    sw.result = siegel_solve(sys);
    if (sw.result.solution) {
      sw.smallest_bound = b;
      break;
    }
  }
  return sw;
}

double PowerOfP::value() const { return std::pow(static_cast<double>(p), exponent.value()); }

int compare(const BigRational& x, const PowerOfP& y) {
  if (x <= 0) throw std::invalid_argument("compare needs a positive rational");
  const BigRational lhs = rpow(x, static_cast<std::uint64_t>(y.exponent.den));
  const BigRational rhs = ppow(y.p, y.exponent.num);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::string to_string(const BigRational& x) {
  const BigInt n = boost::multiprecision::numerator(x), d = boost::multiprecision::denominator(x);
  return d == 1 ? n.str() : n.str() + "/" + d.str();
}

BigRational ParamSet::parse(const std::string& text) {
  auto parse_decimal = [](const std::string& s) -> BigRational {
    if (s.empty()) throw ParamError("empty rational");
    const auto dot = s.find('.');
    const std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    const std::string digits = whole + frac;
    const bool neg = !digits.empty() && digits[0] == '-';
    if (digits.size() == (neg ? 1u : 0u)) throw ParamError("malformed rational '" + s + "'");
    for (std::size_t i = neg ? 1 : 0; i < digits.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(digits[i]))) throw ParamError("malformed rational '" + s + "'");
    BigInt num(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return BigRational(num, den);
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const BigRational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw ParamError("zero denominator in '" + text + "'");
  return parse_decimal(text.substr(0, slash)) / den;
}

std::optional<std::string> ParamSet::violation(const PowerOfP& dl, std::size_t d, bool full) const {
  if (!(1 < delta4)) return "1 < delta4";
  if (!(delta4 < delta3)) return "delta4 < delta3";
  if (!(delta3 < delta2)) return "delta3 < delta2";
  if (!(delta2 < delta1)) return "delta2 < delta1";
  if (compare(delta1, dl) >= 0) return "delta1 < delta_lambda";
  if (compare(delta_plus, dl) <= 0) return "delta_lambda < delta_plus";
  if (!(rpow(delta2, d + 1) < rpow(delta1, d) * delta3)) return "delta2^(d+1) < delta1^d delta3";
  if (!(delta1 < delta2 * delta4)) return "delta1 < delta2 delta4";
  if (full) {
    if (!(c > 0)) return "c > 0";
    if (!epsa_holds(delta2, delta4, c, d)) return "delta2 > delta4^(d+1+c)";
    if (!finas_holds(c, delta_plus, dl, d)) return "p^c > (delta_plus delta_lambda^d)^d";
  }
  return std::nullopt;
}

void ParamSet::validate(const PowerOfP& dl, std::size_t d, bool full) const {
  if (auto v = violation(dl, d, full)) throw ParamError("parameter condition fails: " + *v);
}

ParamSet pick_params(const PowerOfP& dl, std::size_t d) {
  if (d == 0) throw ParamError("pick_params needs d >= 1");
  if (compare(BigRational(1), dl) >= 0) throw ParamError("pick_params needs delta_lambda > 1");
  const double v = dl.value();

  // Dyadic rationals hi > delta_lambda > lo > 1, refined until lo clears 1.
  BigRational lo, hi;
  for (unsigned k = 10;; k += 4) {
    if (k > 200) throw ParamError("delta_lambda too close to 1");
    const BigRational unit = BigRational(1) / rpow(BigRational(2), k);
    const double scale = std::ldexp(1.0, static_cast<int>(std::min(k, 60u)));
    BigRational guess = BigRational(static_cast<long long>(std::floor(v * scale))) / rpow(BigRational(2), std::min(k, 60u));
    lo = guess;
    while (lo > 0 && compare(lo, dl) >= 0) lo -= unit;
    hi = guess;
    while (compare(hi, dl) <= 0) hi += unit;
    if (lo > 1) break;
  }

  ParamSet ps;
  ps.delta_plus = hi;
  ps.c = 1;
  while (!finas_holds(ps.c, ps.delta_plus, dl, d)) ps.c += 1;
  ps.delta2 = 1 + (lo - 1) / 2;
  for (unsigned k = 1;; ++k) {
    if (k > 4000) throw ParamError("no delta4 found");
    ps.delta4 = 1 + BigRational(1) / rpow(BigRational(2), k);
    if (!epsa_holds(ps.delta2, ps.delta4, ps.c, d)) continue;
    ps.delta1 = ps.delta2 * (1 + (ps.delta4 - 1) / 2);
    if (ps.delta1 < lo) break;
  }
  const BigRational ratio = rpow(ps.delta2, d + 1) / rpow(ps.delta1, d);
  ps.delta3 = (std::max(ps.delta4, ratio) + ps.delta2) / 2;
  ps.validate(dl, d, true);
  return ps;
}

std::vector<Monomial> monomials_of_degree(std::size_t d, std::uint64_t s) {
  std::vector<Monomial> out;
  if (d == 0) {
    if (s == 0) out.emplace_back();
    return out;
  }
  Monomial cur(d, 0);
  // Lex order with x_1 highest: the first exponent runs downward.
  auto rec = [&](auto&& self, std::size_t pos, std::uint64_t left) -> void {
    if (pos + 1 == d) {
      cur[pos] = static_cast<std::uint32_t>(left);
      out.push_back(cur);
      return;
    }
    for (std::uint64_t e = left + 1; e-- > 0;) {
      cur[pos] = static_cast<std::uint32_t>(e);
      self(self, pos + 1, left - e);
    }
  };
  rec(rec, 0, s);
  return out;
}

AuxPolynomial build_aux_basic(const TwistedOperator& f, const TwistedOperator& lambda, const ParamSet& params,
                              std::size_t big_n, const AuxOptions& options) {
  if (!f.is_square()) throw std::invalid_argument("build_aux_basic needs a square operator");
  if (lambda.out_dim() != 1 || lambda.in_dim() != f.in_dim())
    throw std::invalid_argument("build_aux_basic needs lambda of shape 1 x d");
  const FqCtxPtr& ctx = f.ctx();
  const std::size_t d = f.in_dim();
  const TwistedOperator pi_op = compose(lambda, iterate(f, big_n));
  if (pi_op.is_zero()) throw InfeasibleError("Pi_N is zero");
  const MPoly pi = pullback_coordinates(pi_op)[0];

  AuxPolynomial aux{MPoly(ctx, d), {}, 0, {}, {}, {}};
  const BigRational deg_bound = rpow(params.delta1, big_n);
  for (std::uint64_t s = 0; BigRational(s) < deg_bound; ++s)
    for (auto& m : monomials_of_degree(d, s)) aux.monomials.push_back(std::move(m));
  const BigRational pow_bound = rpow(params.delta4, d * big_n);
  while (BigRational(aux.powers) < pow_bound) ++aux.powers;
  aux.target_order = static_cast<std::uint64_t>(ceil_of(rpow(params.delta2 * params.delta4, big_n)));
  aux.height_target = to_double(rpow(params.delta3 * params.delta4, big_n));
  aux.unknowns = aux.monomials.size() * aux.powers;
  if (aux.unknowns == 0) throw InfeasibleError("no unknowns at these parameters");
  if (aux.unknowns > options.max_unknowns)
    throw InfeasibleError("aux-build needs " + std::to_string(aux.unknowns) + " unknowns, budget is " +
                          std::to_string(options.max_unknowns));

  // Columns u * Pi^l, l-major.
  std::vector<MPoly> columns;
  MPoly pi_pow = MPoly::constant(ctx, d, RatFunc::constant(ctx, 1));
  for (std::size_t l = 0; l < aux.powers; ++l) {
    if (l > 0) pi_pow = pi_pow * pi;
    for (const auto& u : aux.monomials) {
      columns.push_back(MPoly::monomial(ctx, u, RatFunc::constant(ctx, 1)) * pi_pow);
      aux.labels_u.push_back(u);
      aux.labels_l.push_back(l);
    }
  }

  auto solve = [&](const std::vector<std::size_t>& active) -> std::optional<std::vector<FqPoly>> {
    std::map<Monomial, std::size_t, GradedLex> eq_index;
    for (std::size_t j : active)
      for (const auto& [m, c] : columns[j].terms())
        if (total_degree(m) < aux.target_order) eq_index.emplace(m, 0);
    std::size_t r = 0;
    for (auto& [m, idx] : eq_index) idx = r++;
    aux.equations = eq_index.size();
    LinSysA sys = LinSysA::zeros(ctx, eq_index.size(), active.size(), 0);
    std::vector<FqPoly> scale;
    for (std::size_t col = 0; col < active.size(); ++col) {
      FqPoly l = FqPoly::constant(ctx, 1);
      for (const auto& [m, c] : columns[active[col]].terms())
        if (total_degree(m) < aux.target_order) l = poly_lcm(l, c.den());
      for (const auto& [m, c] : columns[active[col]].terms())
        if (total_degree(m) < aux.target_order) sys.at(eq_index.at(m), col) = c.num() * div_exact(l, c.den());
      scale.push_back(std::move(l));
    }
    SiegelSweep sw = siegel_sweep(std::move(sys), options.max_bound);
    if (!sw.smallest_bound) return std::nullopt;
    aux.bound = *sw.smallest_bound;
    std::vector<FqPoly> full(columns.size(), FqPoly(ctx));
    for (std::size_t col = 0; col < active.size(); ++col) full[active[col]] = (*sw.result.solution)[col] * scale[col];
    return full;
  };
  auto assemble = [&](const std::vector<FqPoly>& c) {
    MPoly g(ctx, d);
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (!c[j].is_zero()) g += columns[j].scaled(RatFunc(c[j]));
    return g;
  };

  std::vector<std::size_t> all(columns.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  auto sol = solve(all);
  if (!sol) throw InfeasibleError("no solution with degree bound up to " + std::to_string(options.max_bound));
  aux.g = assemble(*sol);
  if (aux.g.is_zero()) {
    // The columns are dependent over K; keep an independent subset so that
    // every nonzero kernel vector gives a nonzero polynomial.
    std::vector<std::size_t> independent;
    std::vector<MPoly> kept;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      kept.push_back(columns[j]);
      if (rank_over_k(kept) == kept.size()) {
        independent.push_back(j);
      } else {
        kept.pop_back();
      }
    }
    sol = solve(independent);
    if (!sol) throw InfeasibleError("no solution on the independent columns");
    aux.g = assemble(*sol);
  }
  if (aux.g.is_zero()) throw std::logic_error("auxiliary polynomial vanished identically");
  aux.coeffs = std::move(*sol);
  aux.order_at_zero = aux.g.lowest_degree();
  if (aux.order_at_zero < aux.target_order) throw std::logic_error("auxiliary polynomial misses its target order");
  for (const auto& c : aux.coeffs) aux.max_coeff_height = std::max(aux.max_coeff_height, height(RatFunc(c)).value);
  return aux;
}

std::uint32_t binomial_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  while (n || k) {
    const std::uint64_t a = n % p, b = k % p;
    if (b > a) return 0;
    // C(a, b) mod p for digits a, b < p.
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < b; ++i) {
      num = num * ((a - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    std::uint64_t inv = 1, base = den, e = p - 2;
    for (; e; e >>= 1) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
    }
    r = r * (num * inv % p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<std::uint32_t>(r);
}

MPoly hyperderivative_poly(const MPoly& g, const Monomial& idx) {
  if (idx.size() != g.nvars()) throw std::invalid_argument("hyperderivative: index has wrong length");
  const FqCtx& k = *g.ctx();
  MPoly out(g.ctx(), g.nvars());
  for (const auto& [a, c] : g.terms()) {
    std::uint64_t coef = 1;
    Monomial rest(a.size());
    bool ok = true;
    for (std::size_t t = 0; t < a.size() && ok; ++t) {
      if (a[t] < idx[t]) {
        ok = false;
        break;
      }
      coef = coef * binomial_mod_p(a[t], idx[t], k.p()) % k.p();
      rest[t] = a[t] - idx[t];
    }
    if (!ok || coef == 0) continue;
    out.add_term(rest, c.scaled(k.from_int(static_cast<std::int64_t>(coef))));
  }
  return out;
}

RatFunc hyperderivative(const MPoly& g, const Monomial& idx, const PointK& q) {
  if (q.dim() != g.nvars()) throw std::invalid_argument("hyperderivative: point has wrong dimension");
  return hyperderivative_poly(g, idx).evaluate(q.coords);
}

std::uint64_t vanishing_order(const MPoly& g, const PointK& q, std::uint64_t max_order) {
  if (g.is_zero()) throw std::invalid_argument("vanishing_order of the zero polynomial");
  if (q.is_zero()) return std::min(g.lowest_degree(), max_order);
  for (std::uint64_t s = 0; s < max_order; ++s)
    for (const auto& idx : monomials_of_degree(g.nvars(), s))
      if (!hyperderivative(g, idx, q).is_zero()) return s;
  return max_order;
}

namespace {
void check_v0_preconditions(const MPoly& g, const PointK& q, const Place& v) {
  if (g.is_zero()) throw std::invalid_argument("v0 check of the zero polynomial");
  for (const auto& c : q.coords)
    if (valuation(c, v) < 1) throw IntegralityError("point is not in the maximal ideal at " + v.to_string());
  for (const auto& [m, c] : g.terms())
    if (valuation(c, v) < 0) throw IntegralityError("coefficient is not integral at " + v.to_string());
}
}  // namespace

bool v0_order_lower_bound_check(const MPoly& g, const PointK& q, const Place& v) {
  check_v0_preconditions(g, q, v);
  const std::int64_t order = static_cast<std::int64_t>(g.lowest_degree());
  return valuation(g.evaluate(q.coords), v) >= order;
}

V0Check v0_hyperderivative_check(const MPoly& g, const PointK& q, const Place& v, std::uint64_t max_index) {
  check_v0_preconditions(g, q, v);
  V0Check res;
  res.order_at_zero = g.lowest_degree();
  for (std::uint64_t s = 0; s <= max_index; ++s) {
    for (const auto& idx : monomials_of_degree(g.nvars(), s)) {
      const std::int64_t val = valuation(hyperderivative(g, idx, q), v);
      const std::int64_t need = static_cast<std::int64_t>(res.order_at_zero) - static_cast<std::int64_t>(s);
      if (val < need) res.holds = false;
      res.rows.push_back({idx, val, need});
    }
  }
  return res;
}

}  // namespace tmlab
