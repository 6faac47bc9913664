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

#include "tmlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "tmlab/dynamics.hpp"
#include "tmlab/factor.hpp"
#include "tmlab/heights.hpp"
#include "tmlab/ore.hpp"
#include "tmlab/parse.hpp"
#include "tmlab/saturation.hpp"
#include "tmlab/siegel.hpp"

namespace tmlab::harness {

using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << csv_field(cells[i]);
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

template <class T>
T param(const json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameter '") + key + "': " + e.what());
  }
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  if (s.empty()) throw ConfigError("empty " + std::string(what));
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) || v > (UINT64_MAX - 9) / 10)
      throw ConfigError("bad " + std::string(what) + " '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  std::int64_t sign = 1;
  std::string num = s.substr(0, slash);
  if (!num.empty() && num[0] == '-') {
    sign = -1;
    num = num.substr(1);
  }
  const auto n = static_cast<std::int64_t>(parse_uint(num, "rational"));
  const auto d = slash == std::string::npos ? 1 : static_cast<std::int64_t>(parse_uint(s.substr(slash + 1), "rational"));
  if (d == 0) throw ConfigError("zero denominator in '" + s + "'");
  return Rational::make(sign * n, d);
}

bool rational_le(const Rational& a, const Rational& b) { return a.num * b.den <= b.num * a.den; }

json progression_json(const std::optional<Progression>& pr) {
  if (!pr) return nullptr;
  return json{{"offset", pr->offset}, {"period", pr->period}, {"step", pr->step}, {"rate", pr->rate.to_string()}};
}

std::string power_label(std::uint32_t p, const Rational& r) {
  return std::to_string(p) + "^(" + r.to_string() + ")";
}

std::string monomial_string(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i + 1);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string height_column(const FqCtxPtr& ctx) { return "height(q=" + std::to_string(ctx->q()) + ")"; }

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

// Reductions modulo q are used instead of std::uniform_int_distribution so
// that every standard library draws the same values.
FqPoly draw_poly(const FqCtxPtr& ctx, std::mt19937_64& rng, std::uint64_t max_degree, bool nonzero) {
  for (;;) {
    std::vector<Fq> c(max_degree + 1);
    for (auto& x : c) x = static_cast<Fq>(rng() % ctx->q());
    FqPoly f = FqPoly::from_dense(ctx, c);
    if (!nonzero || !f.is_zero()) return f;
  }
}

RatFunc draw_ratfunc(const FqCtxPtr& ctx, std::mt19937_64& rng, std::uint64_t max_degree, bool nonzero) {
  return RatFunc::make(draw_poly(ctx, rng, max_degree, nonzero), draw_poly(ctx, rng, max_degree, true));
}

// All polynomials of degree <= k, zero included, in counting order.
std::vector<FqPoly> all_polys(const FqCtxPtr& ctx, std::uint64_t k) {
  std::vector<FqPoly> out;
  std::vector<Fq> c(k + 1, 0);
  for (;;) {
    out.push_back(FqPoly::from_dense(ctx, c));
    std::size_t i = 0;
    while (i < c.size() && c[i] == ctx->q() - 1) c[i++] = 0;
    if (i == c.size()) break;
    ++c[i];
  }
  return out;
}

std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint32_t smallest_prime_factor(std::uint64_t n) {
  for (std::uint64_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return static_cast<std::uint32_t>(k);
  return static_cast<std::uint32_t>(n);
}

FqCtxPtr field_for(std::uint64_t p, const FqCtxPtr& field) {
  if (field) {
    if (field->p() != p) throw ConfigError("preset characteristic " + std::to_string(p) + " disagrees with the field");
    return field;
  }
  if (p < 2 || p > 65521 || smallest_prime_factor(p) != p) throw ConfigError("p = " + std::to_string(p) + " is not a prime");
  return FqCtx::prime(static_cast<std::uint32_t>(p));
}

RatFunc parse_entry(const FqCtxPtr& ctx, const json& e, const std::string& where) {
  std::string text;
  if (e.is_string()) {
    text = e.get<std::string>();
  } else if (e.is_number_integer()) {
    text = std::to_string(e.get<std::int64_t>());
    if (text[0] == '-') text = "0" + text;
  } else {
    throw ConfigError(where + ": expected a string");
  }
  try {
    return parse_ratfunc(ctx, text);
  } catch (const ParseError& err) {
    throw ConfigError(where + ": " + err.what());
  }
}

// ---------------------------------------------------------------- verdicts

struct Context {
  const ExperimentConfig& cfg;
  const std::string& command;
  RunResult& out;

  void verdict(std::string anchor, Status s, std::string detail) {
    out.verdicts.push_back({cfg.id, command, std::move(anchor), s, std::move(detail), {}});
  }
  void check(std::string anchor, bool ok, std::string detail) {
    verdict(std::move(anchor), ok ? Status::pass : Status::fail, std::move(detail));
  }
  const TwistedOperator& f() const {
    if (!cfg.f) throw ConfigError(command + " needs a module");
    return *cfg.f;
  }
  const PointK& point() const {
    if (!cfg.point) throw ConfigError(command + " needs a point");
    return *cfg.point;
  }
  const TwistedOperator& lambda() const {
    if (!cfg.lambda) throw ConfigError(command + " needs lambda");
    return *cfg.lambda;
  }
  const json& params() const { return cfg.params; }
  json header() const {
    json j{{"experiment", cfg.id}, {"command", command}, {"module", cfg.module_label},
           {"p", cfg.ctx->p()}, {"q", cfg.ctx->q()}, {"seed", cfg.seed}};
    return j;
  }
};

std::optional<Rational> expected_rate(const json& p) {
  if (!p.contains("expect_rate")) return std::nullopt;
  return parse_rational(param<std::string>(p, "expect_rate", ""));
}

json growth_rows(const GrowthReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json j{{"n", r.n}, {"tau_degree", r.tau_degree}};
    if (r.height >= 0) j["height"] = r.height;
    if (r.root_estimate) j["root_estimate"] = *r.root_estimate;
    if (r.ratio_estimate) j["ratio_estimate"] = *r.ratio_estimate;
    if (r.proxy) j["proxy"] = *r.proxy;
    if (r.coeff_height) j["coeff_height"] = *r.coeff_height;
    if (r.window_bound) j["window_bound"] = *r.window_bound;
    rows.push_back(std::move(j));
  }
  return rows;
}

void degree_report(Context& cx, const GrowthReport& rep, const std::string& what) {
  Csv csv({"n", "tau_degree", "root_estimate"});
  for (const auto& r : rep.rows)
    csv.row({std::to_string(r.n), std::to_string(r.tau_degree), r.root_estimate ? fmt(*r.root_estimate) : ""});
  cx.out.csv = csv.str();
  json j = cx.header();
  j["n_max"] = rep.rows.empty() ? 0 : rep.rows.back().n;
  j["rows"] = growth_rows(rep);
  j["exact_rate"] = progression_json(rep.exact_rate);
  j["delta"] = rep.delta() ? json(*rep.delta()) : json(nullptr);
  cx.out.json = std::move(j);

  if (rep.exact_rate) {
    cx.verdict(what, Status::data,
               what + " = " + power_label(rep.p, rep.exact_rate->rate) + " = " + fmt(*rep.delta()) +
                   " (tau-degrees arithmetic from n = " + std::to_string(rep.exact_rate->offset) + ", period " +
                   std::to_string(rep.exact_rate->period) + ")");
  } else {
    cx.verdict(what, Status::data, "tau-degrees not yet arithmetic; only root estimates are reported");
  }
  if (auto want = expected_rate(cx.params())) {
    const bool ok = rep.exact_rate && rep.exact_rate->rate == *want;
    cx.check(what + " matches the expected exponent", ok,
             "expected " + power_label(rep.p, *want) + ", measured " +
                 (rep.exact_rate ? power_label(rep.p, rep.exact_rate->rate) : std::string("none")));
  }
}

// ---------------------------------------------------------------- commands

void cmd_delta(Context& cx) {
  const auto& f = cx.f();
  const auto n_max = param<std::size_t>(cx.params(), "n_max", 12);
  GrowthReport rep = dynamic_degree(f, n_max);
  degree_report(cx, rep, "dynamic degree");
  const std::int64_t r = static_cast<std::int64_t>(f.tau_degree());
  bool ok = true;
  for (const auto& row : rep.rows) ok = ok && row.tau_degree <= static_cast<std::int64_t>(row.n) * r;
  cx.check("tau-degree of F^n at most n times that of F", ok, "tau-degree of F is " + std::to_string(r));
}

void cmd_delta_lambda(Context& cx) {
  const auto& f = cx.f();
  const auto n_max = param<std::size_t>(cx.params(), "n_max", 12);
  GrowthReport rep = restricted_degree(f, cx.lambda(), n_max);
  degree_report(cx, rep, "restricted degree");
  GrowthReport full = dynamic_degree(f, n_max);
  cx.out.json["dynamic_rate"] = progression_json(full.exact_rate);
  if (rep.exact_rate && full.exact_rate) {
    cx.check("restricted degree at most the dynamic degree", rational_le(rep.exact_rate->rate, full.exact_rate->rate),
             power_label(rep.p, rep.exact_rate->rate) + " vs " + power_label(rep.p, full.exact_rate->rate));
  } else {
    bool ok = true;
    for (std::size_t n = 0; n < rep.rows.size(); ++n) ok = ok && rep.rows[n].tau_degree <= full.rows[n].tau_degree;
    cx.check("restricted degree at most the dynamic degree", ok, "compared tau-degrees term by term");
  }
}

void cmd_alpha(Context& cx) {
  const auto& f = cx.f();
  const auto n_max = param<std::size_t>(cx.params(), "n_max", 10);
  const bool restricted = param<bool>(cx.params(), "restricted", cx.cfg.lambda_given);
  const auto degree_n_max = param<std::size_t>(cx.params(), "degree_n_max", n_max);
  const GrowthReport deg = restricted ? restricted_degree(f, cx.lambda(), degree_n_max) : dynamic_degree(f, degree_n_max);
  const std::optional<double> delta = deg.delta();
  GrowthReport rep = arithmetic_degree(f, cx.point(), restricted ? &cx.lambda() : nullptr, n_max, delta);

  Csv csv({"n", height_column(cx.cfg.ctx), "root_estimate", "ratio_estimate", "proxy", "coeff_height", "window_bound"});
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& r : rep.rows)
    csv.row({std::to_string(r.n), std::to_string(r.height), opt(r.root_estimate), opt(r.ratio_estimate), opt(r.proxy),
             std::to_string(*r.coeff_height), std::to_string(*r.window_bound)});
  cx.out.csv = csv.str();
  json j = cx.header();
  j["restricted"] = restricted;
  j["point"] = cx.point().to_string();
  if (restricted) j["lambda"] = cx.lambda().to_string();
  j["degree_rate"] = progression_json(deg.exact_rate);
  j["delta"] = delta ? json(*delta) : json(nullptr);
  j["rows"] = growth_rows(rep);
  j["window_violations"] = rep.window_violations;
  j["heights_bounded"] = rep.heights_bounded;
  const std::string what = restricted ? "h(lambda(F^n P))" : "h(F^n P)";

  cx.check(what + " at most coefficient height plus p^t(n) h(P)", rep.window_violations == 0,
           std::to_string(rep.window_violations) + " violations over n <= " + std::to_string(n_max));
  if (cx.params().contains("root_factor")) {
    const double factor = param<double>(cx.params(), "root_factor", 1.0);
    const auto from = param<std::size_t>(cx.params(), "root_from", 1);
    if (from == 0 || from > n_max) throw ConfigError("root_from must lie in [1, n_max]");
    std::string detail;
    bool ok = delta.has_value();
    double worst = 0.0;
    if (ok) {
      for (std::size_t n = from; n <= n_max; ++n) {
        const double root = rep.rows[n].root_estimate.value_or(0.0);
        worst = std::max(worst, root / *delta);
        if (root > factor * *delta) ok = false;
      }
      detail = "max h^(1/n) / delta = " + fmt(worst) + " for n in [" + std::to_string(from) + ", " +
               std::to_string(n_max) + "], factor " + fmt(factor);
    } else {
      detail = "degree has no exact rate within " + std::to_string(degree_n_max) + " iterates";
    }
    j["root_check"] = {{"factor", factor}, {"from", from}, {"worst_ratio", worst}, {"holds", ok}};
    cx.check(what + "^(1/n) at most factor times the degree", ok, detail);
  }
  cx.verdict("orbit height growth", Status::data, rep.heights_bounded ? "bounded heights" : "growing heights");
  cx.out.json = std::move(j);
}

void cmd_orbit(Context& cx) {
  const auto n = param<std::size_t>(cx.params(), "n", 5);
  const std::vector<PointK> pts = orbit(cx.f(), cx.point(), n);
  Csv csv({"n", height_column(cx.cfg.ctx), "point"});
  json j = cx.header();
  json rows = json::array();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::int64_t h = height_tuple(pts[k].coords).value;
    csv.row({std::to_string(k), std::to_string(h), pts[k].to_string()});
    rows.push_back({{"n", k}, {"height", h}, {"point", pts[k].to_string()}});
  }
  j["rows"] = std::move(rows);
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.verdict("orbit heights", Status::data, "heights of F^n P for n <= " + std::to_string(n));
}

void cmd_height(Context& cx) {
  const FqCtxPtr& ctx = cx.cfg.ctx;
  std::vector<std::vector<RatFunc>> tuples;
  if (cx.params().contains("tuples")) {
    const json& list = cx.params().at("tuples");
    if (!list.is_array()) throw ConfigError("tuples must be a list of lists");
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::vector<RatFunc> t;
      const json& tj = list[i];
      if (!tj.is_array()) throw ConfigError("tuples[" + std::to_string(i) + "] must be a list");
      for (std::size_t k = 0; k < tj.size(); ++k)
        t.push_back(parse_entry(ctx, tj[k], "tuples[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
      tuples.push_back(std::move(t));
    }
  }
  const auto count = param<std::size_t>(cx.params(), "count", tuples.empty() ? 100 : 0);
  const auto max_degree = param<std::uint64_t>(cx.params(), "max_degree", 4);
  const auto tuple_size = param<std::size_t>(cx.params(), "tuple_size", 3);
  if (tuple_size == 0) throw ConfigError("tuple_size must be positive");
  auto rng = stream(cx.cfg.seed, 1);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t len = 1 + rng() % tuple_size;
    std::vector<RatFunc> t;
    for (std::size_t k = 0; k < len; ++k) t.push_back(draw_ratfunc(ctx, rng, max_degree, false));
    tuples.push_back(std::move(t));
  }
  std::size_t exhaustive = 0;
  if (cx.params().contains("exhaustive_degree")) {
    const auto k = param<std::uint64_t>(cx.params(), "exhaustive_degree", 0);
    const auto polys = all_polys(ctx, k);
    for (const auto& num : polys)
      for (const auto& den : polys)
        if (!den.is_zero() && den.lead() == 1) {
          tuples.push_back({RatFunc::make(num, den)});
          ++exhaustive;
        }
  }
  Csv csv({"index", "tuple", height_column(ctx), "by_places"});
  std::size_t mismatches = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto fast = height_tuple(tuples[i]).value;
    const auto slow = height_tuple_by_places(tuples[i]).value;
    if (fast != slow) ++mismatches;
    std::string text = PointK{tuples[i]}.to_string();
    csv.row({std::to_string(i), text, std::to_string(fast), std::to_string(slow)});
    rows.push_back({{"tuple", text}, {"height", fast}, {"by_places", slow}});
  }
  json j = cx.header();
  j["exhaustive"] = exhaustive;
  j["rows"] = std::move(rows);
  j["mismatches"] = mismatches;
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.check("height from degrees equals the sum over places", mismatches == 0 && !tuples.empty(),
           std::to_string(tuples.size()) + " tuples (" + std::to_string(exhaustive) + " exhaustive), " +
               std::to_string(mismatches) + " mismatches");
}

void cmd_truncbound(Context& cx) {
  const auto& f = cx.f();
  const auto n_max = param<std::size_t>(cx.params(), "n_max", 10);
  const double p = static_cast<double>(cx.cfg.ctx->p());
  const double s = param<double>(cx.params(), "s", p);
  const double s_plus = param<double>(cx.params(), "s_plus", s + 1.0);
  if (!(s >= 1.0 && s < s_plus)) throw ConfigError("truncbound needs 1 <= s < s_plus");
  TruncboundResult res = truncbound_check(f, n_max, s, s_plus);
  Csv csv({"n", "i", height_column(cx.cfg.ctx), "bound"});
  for (const auto& r : res.rows)
    csv.row({std::to_string(r.n), std::to_string(r.i), std::to_string(r.height), std::to_string(r.bound)});
  json j = cx.header();
  j["constant"] = res.constant;
  j["margin"] = res.margin;
  j["violations"] = res.violations;
  j["n_max"] = n_max;
  json low = json::array();
  for (const auto& r : res.low_twist_rows)
    low.push_back({{"n", r.n}, {"max_height", r.max_height}, {"s_plus_power", r.s_plus_power}});
  j["low_twist_rows"] = std::move(low);
  j["s"] = s;
  j["s_plus"] = s_plus;
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.check("h(A_{n,i}) at most C n p^i", res.holds,
           "C = " + std::to_string(res.constant) + ", " + std::to_string(res.violations) + " violations, max h/(n p^i) = " +
               fmt(res.margin));
}

void cmd_kappa(Context& cx) {
  const auto& f = cx.f();
  const json& p = cx.params();
  const auto n_max = param<std::size_t>(p, "N_max", 3);
  if (n_max < 2) throw ConfigError("kappa needs N_max >= 2");
  std::vector<std::size_t> ls;
  if (p.contains("L") && p.at("L").is_array()) {
    ls = param<std::vector<std::size_t>>(p, "L", {});
  } else {
    ls.push_back(param<std::size_t>(p, "L", 2));
  }
  if (ls.empty() || std::find(ls.begin(), ls.end(), 0u) != ls.end()) throw ConfigError("L values must be positive");
  std::sort(ls.begin(), ls.end());
  const bool capped = p.contains("degree_cap");
  const auto cap = param<std::uint64_t>(p, "degree_cap", 0);
  SpanPolicy policy;
  policy.max_products = param<std::size_t>(p, "max_products", policy.max_products);
  const auto degree_n_max = param<std::size_t>(p, "degree_n_max", 12);

  IterateCache cache(f);
  const GrowthReport deg = dynamic_degree(f, degree_n_max, &cache);
  const bool exact = deg.exact_rate.has_value();
  const double delta = exact ? *deg.delta() : deg.rows.back().root_estimate.value_or(1.0);
  const std::size_t d = f.in_dim();

  Csv csv({"N", "L", "degree_cap", "dim", "estimate", "lower_bound", "counting_bound"});
  json reports = json::array();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> dims;
  bool within = true;
  std::vector<KappaBracket> brackets;
  for (std::size_t big_l : ls) {
    std::vector<KappaPoint> pts;
    for (std::size_t big_n = 1; big_n <= n_max; ++big_n) {
      PsiBasis basis = psi_build(f, big_n, big_l, capped ? cap : 0, &cache);
      // Degree of the product of all Psi; every product lies below it.
      std::uint64_t total = 0;
      for (const auto& g : basis.psi) total += g.total_degree();
      if (!capped) basis.degree_cap = total;
      const SpanResult sr = span_dimension(basis, policy);
      const std::uint64_t room = monomial_count(d, std::min(total, basis.degree_cap));
      if (sr.dim > room) within = false;
      const double est = std::pow(static_cast<double>(sr.dim), 1.0 / static_cast<double>(d * big_n));
      pts.push_back({big_n, big_l, basis.degree_cap, sr.dim, sr.lower_bound, est});
      dims[{big_n, big_l}] = sr.dim;
      csv.row({std::to_string(big_n), std::to_string(big_l), std::to_string(basis.degree_cap), std::to_string(sr.dim),
               fmt(est), sr.lower_bound ? "1" : "0", std::to_string(sr.counting_bound)});
    }
    const KappaBracket b = kappa_bracket(d, delta, exact, pts);
    brackets.push_back(b);
    for (const auto& pt : pts) {
      reports.push_back({{"N", pt.big_n},
                         {"L", pt.big_l},
                         {"degree_cap", pt.degree_cap},
                         {"dim", pt.dim},
                         {"estimate", pt.estimate},
                         {"lower_bound", pt.lower_bound},
                         {"bracket",
                          {{"lower", b.lower},
                           {"upper", b.upper},
                           {"upper_is_estimate", b.upper_is_estimate},
                           {"measured_max", b.measured_max}}}});
    }
  }
  bool monotone = true;
  for (const auto& [key, dim] : dims) {
    auto prev_n = dims.find({key.first - 1, key.second});
    if (prev_n != dims.end() && prev_n->second > dim) monotone = false;
    for (const auto& [k2, d2] : dims)
      if (k2.first == key.first && k2.second < key.second && d2 > dim) monotone = false;
  }
  json j = cx.header();
  j["delta"] = delta;
  j["delta_exact"] = exact;
  j["reports"] = std::move(reports);
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.check("span dimension nondecreasing in N and L", monotone, std::to_string(dims.size()) + " measurements");
  cx.check("span dimension at most the monomial count below the largest product degree", within,
           std::to_string(dims.size()) + " measurements");
  const KappaBracket& b = brackets.back();
  cx.verdict("saturation degree bracket", Status::data,
             "[" + fmt(b.lower) + ", " + fmt(b.upper) + "], best measured " + fmt(b.measured_max));
  if (p.contains("expect_in_bracket")) {
    const double x = param<double>(p, "expect_in_bracket", 0.0);
    cx.check("saturation degree bracket contains the expected value", b.lower <= x && x <= b.upper,
             fmt(x) + " in [" + fmt(b.lower) + ", " + fmt(b.upper) + "]");
  }
}

void cmd_siegel_demo(Context& cx) {
  const FqCtxPtr& ctx = cx.cfg.ctx;
  const json& p = cx.params();
  std::vector<LinSysA> systems;
  if (p.contains("systems")) {
    const json& list = p.at("systems");
    for (std::size_t s = 0; s < list.size(); ++s) {
      const json& rows = list[s];
      if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw ConfigError("systems must be lists of rows");
      LinSysA sys = LinSysA::zeros(ctx, rows.size(), rows[0].size(), 0);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != sys.cols) throw ConfigError("ragged system " + std::to_string(s));
        for (std::size_t c = 0; c < sys.cols; ++c) {
          const std::string where = "systems[" + std::to_string(s) + "][" + std::to_string(r) + "][" + std::to_string(c) + "]";
          const RatFunc e = parse_entry(ctx, rows[r][c], where);
          if (!e.is_polynomial()) throw ConfigError(where + ": entries must be polynomials");
          sys.at(r, c) = e.num();
        }
      }
      systems.push_back(std::move(sys));
    }
  }
  const auto count = param<std::size_t>(p, "count", systems.empty() ? 10 : 0);
  const auto rows_max = param<std::size_t>(p, "rows_max", 3);
  const auto cols_max = param<std::size_t>(p, "cols_max", 8);
  const auto max_degree = param<std::uint64_t>(p, "max_degree", 2);
  const auto max_bound = param<std::uint64_t>(p, "max_bound", 16);
  if (count > 0 && (rows_max == 0 || cols_max <= 1)) throw ConfigError("siegel-demo needs rows_max >= 1, cols_max >= 2");
  auto rng = stream(cx.cfg.seed, 2);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t m = 1 + rng() % std::min(rows_max, cols_max - 1);
    const std::size_t l = m + 1 + rng() % (cols_max - m);
    LinSysA sys = LinSysA::zeros(ctx, m, l, 0);
    for (auto& e : sys.entries) e = draw_poly(ctx, rng, max_degree, false);
    systems.push_back(std::move(sys));
  }

  Csv csv({"index", "M", "L", "max_entry_degree", "system_height", "counting_bound", "smallest_bound", "dirichlet",
           "unknowns", "equations", "rank"});
  json entries = json::array();
  std::size_t failures = 0, underdetermined = 0;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    LinSysA& sys = systems[i];
    std::int64_t deg = 0;
    for (const auto& e : sys.entries) deg = std::max(deg, e.degree());
    // Smallest B with L (B + 1) > M (deg + B + 1): the F_p-linear system is
    // then underdetermined.
    std::optional<std::uint64_t> counting;
    if (sys.cols > sys.rows) {
      std::uint64_t b = 0;
      while (sys.cols * (b + 1) <= sys.rows * (static_cast<std::uint64_t>(deg) + b + 1)) ++b;
      counting = b;
    }
    SiegelSweep sw = siegel_sweep(sys, std::max<std::uint64_t>(max_bound, counting.value_or(0)));
    json e{{"M", sys.rows}, {"L", sys.cols}, {"max_entry_degree", deg}, {"system_height", sw.system_height},
           {"dirichlet", std::isfinite(sw.dirichlet_prediction) ? json(sw.dirichlet_prediction) : json(nullptr)}};
    json rows = json::array();
    for (std::size_t r = 0; r < sys.rows; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < sys.cols; ++c) row.push_back(sys.at(r, c).to_string());
      rows.push_back(std::move(row));
    }
    e["system"] = std::move(rows);
    if (counting) {
      ++underdetermined;
      sys.bound = *counting;
      SiegelResult at = siegel_solve(sys);  // substitution is checked inside
      e["counting_bound"] = *counting;
      e["unknowns"] = at.unknowns;
      e["equations"] = at.equations;
      e["rank"] = at.rank;
      e["verified"] = at.solution.has_value();
      if (!at.solution || at.unknowns <= at.equations) ++failures;
      if (at.solution) {
        json sol = json::array();
        for (const auto& c : *at.solution) sol.push_back(c.to_string());
        e["solution"] = std::move(sol);
      }
    }
    e["smallest_bound"] = sw.smallest_bound ? json(*sw.smallest_bound) : json(nullptr);
    csv.row({std::to_string(i), std::to_string(sys.rows), std::to_string(sys.cols), std::to_string(deg),
             std::to_string(sw.system_height), counting ? std::to_string(*counting) : "",
             sw.smallest_bound ? std::to_string(*sw.smallest_bound) : "", fmt(sw.dirichlet_prediction),
             e.value("unknowns", json(0)).dump(), e.value("equations", json(0)).dump(), e.value("rank", json(0)).dump()});
    entries.push_back(std::move(e));
  }
  json j = cx.header();
  j["systems"] = std::move(entries);
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.check("nonzero solution when unknowns exceed equations", failures == 0 && underdetermined > 0,
           std::to_string(underdetermined) + " underdetermined systems, " + std::to_string(failures) + " failures");
}

Place parse_place(const FqCtxPtr& ctx, const std::string& s) {
  if (s == "inf" || s == "infinity") return Place::infinity(ctx);
  try {
    return Place::finite(parse_poly(ctx, s));
  } catch (const ParseError& e) {
    throw ConfigError("place '" + s + "': " + e.what());
  } catch (const FieldError& e) {
    throw ConfigError("place '" + s + "': " + e.what());
  }
}

json reduction_json(const ReductionReport& rep) {
  json res = json::array();
  for (const auto& r : rep.residues) {
    json row = json::array();
    for (const auto& c : r) row.push_back(c.to_string());
    res.push_back(std::move(row));
  }
  return {{"place", rep.place.to_string()}, {"s1", rep.s1}, {"s2", rep.s2}, {"pigeonhole_bound", rep.pigeonhole_bound},
          {"shifted", rep.shifted.to_string()}, {"verified", rep.verified}, {"residues", std::move(res)}};
}

void cmd_aux_build(Context& cx) {
  const auto& f = cx.f();
  const json& p = cx.params();
  const auto big_n = param<std::size_t>(p, "N", 3);
  const std::size_t d = f.in_dim();
  const std::uint32_t prime = cx.cfg.ctx->p();
  json j = cx.header();
  j["N"] = big_n;
  j["lambda"] = cx.lambda().to_string();

  PowerOfP dl{prime, {}};
  if (p.contains("delta_lambda")) {
    dl.exponent = parse_rational(param<std::string>(p, "delta_lambda", ""));
  } else {
    const auto n_deg = param<std::size_t>(p, "degree_n_max", 8);
    const GrowthReport rep = restricted_degree(f, cx.lambda(), n_deg);
    if (!rep.exact_rate) {
      cx.verdict("auxiliary polynomial", Status::data, "restricted degree has no exact rate; nothing built");
      cx.out.json = std::move(j);
      cx.out.csv = Csv({"u", "l", "coefficient"}).str();
      return;
    }
    dl.exponent = rep.exact_rate->rate;
  }
  j["delta_lambda"] = power_label(prime, dl.exponent);

  ParamSet ps;
  bool full = true;
  if (p.contains("param_set")) {
    const json& q = p.at("param_set");
    auto get = [&](const char* key) -> BigRational {
      if (!q.contains(key)) throw ConfigError(std::string("param_set needs ") + key);
      try {
        return ParamSet::parse(q.at(key).get<std::string>());
      } catch (const ParamError& e) {
        throw ConfigError(std::string("param_set.") + key + ": " + e.what());
      } catch (const json::exception& e) {
        throw ConfigError(std::string("param_set.") + key + " must be a string");
      }
    };
    ps.delta1 = get("delta1");
    ps.delta2 = get("delta2");
    ps.delta3 = get("delta3");
    ps.delta4 = get("delta4");
    ps.delta_plus = get("delta_plus");
    full = q.contains("c");
    ps.c = full ? get("c") : BigRational(0);
  } else {
    try {
      ps = pick_params(dl, d);
    } catch (const ParamError& e) {
      cx.check("parameter conditions", false, e.what());
      cx.out.json = std::move(j);
      return;
    }
  }
  j["param_set"] = {{"delta1", to_string(ps.delta1)}, {"delta2", to_string(ps.delta2)},
                    {"delta3", to_string(ps.delta3)}, {"delta4", to_string(ps.delta4)},
                    {"delta_plus", to_string(ps.delta_plus)}, {"c", to_string(ps.c)}};
  const auto violation = ps.violation(dl, d, full);
  cx.check("parameter conditions", !violation,
           violation ? "fails " + *violation : std::string(full ? "all conditions hold" : "ordering and concavity hold"));
  Csv csv({"u", "l", "coefficient"});
  if (violation) {
    cx.out.json = std::move(j);
    cx.out.csv = csv.str();
    return;
  }

  AuxOptions opt;
  opt.max_unknowns = param<std::size_t>(p, "max_unknowns", opt.max_unknowns);
  opt.max_bound = param<std::uint64_t>(p, "max_bound", opt.max_bound);
  AuxPolynomial aux{MPoly(cx.cfg.ctx, d), {}, 0, {}, {}, {}};
  try {
    aux = build_aux_basic(f, cx.lambda(), ps, big_n, opt);
  } catch (const InfeasibleError& e) {
    cx.verdict("auxiliary polynomial", Status::data, std::string("infeasible: ") + e.what());
    cx.out.json = std::move(j);
    cx.out.csv = csv.str();
    return;
  }
  json poly = json::object();
  for (const auto& [m, c] : aux.g.terms()) poly[monomial_string(m)] = c.to_string();
  json coeffs = json::array();
  for (std::size_t k = 0; k < aux.coeffs.size(); ++k) {
    csv.row({monomial_string(aux.labels_u[k]), std::to_string(aux.labels_l[k]), aux.coeffs[k].to_string()});
    coeffs.push_back(
        {{"u", monomial_string(aux.labels_u[k])}, {"l", aux.labels_l[k]}, {"c", aux.coeffs[k].to_string()}});
  }
  j["polynomial"] = std::move(poly);
  j["coefficients"] = std::move(coeffs);
  j["target_order"] = aux.target_order;
  j["order_at_zero"] = aux.order_at_zero;
  j["bound"] = aux.bound;
  j["unknowns"] = aux.unknowns;
  j["equations"] = aux.equations;
  j["monomials"] = aux.monomials.size();
  j["powers"] = aux.powers;
  j["max_coeff_height"] = aux.max_coeff_height;
  j["height_target"] = aux.height_target;
  cx.check("G vanishes at 0 to the target order", aux.order_at_zero >= aux.target_order,
           "order " + std::to_string(aux.order_at_zero) + ", target " + std::to_string(aux.target_order));
  if (p.contains("min_target")) {
    const auto want = param<std::uint64_t>(p, "min_target", 0);
    cx.check("target order at least the requested minimum", aux.target_order >= want,
             std::to_string(aux.target_order) + " >= " + std::to_string(want));
  }
  cx.verdict("coefficient height", Status::data,
             "max h(c) = " + std::to_string(aux.max_coeff_height) + ", (delta3 delta4)^N = " + fmt(aux.height_target));

  if (p.contains("place")) {
    const Place v = parse_place(cx.cfg.ctx, param<std::string>(p, "place", ""));
    const auto max_index = param<std::uint64_t>(p, "max_index", 3);
    try {
      const ReductionReport red = reduce_and_shift(f, cx.point(), v);
      j["reduction"] = reduction_json(red);
      const bool order_ok = v0_order_lower_bound_check(aux.g, red.shifted, v);
      const V0Check chk = v0_hyperderivative_check(aux.g, red.shifted, v, max_index);
      json rows = json::array();
      for (const auto& r : chk.rows)
        rows.push_back({{"i", monomial_string(r.idx)},
                        {"valuation", r.valuation == kInfiniteValuation ? json("inf") : json(r.valuation)},
                        {"required", r.required}});
      j["v0_rows"] = std::move(rows);
      cx.check("ord_v G(Q) at least ord_0 G", order_ok, "Q = " + red.shifted.to_string() + " at " + v.to_string());
      cx.check("ord_v Delta_i(G)(Q) at least ord_0 G - |i|", chk.holds,
               "|i| <= " + std::to_string(max_index) + ", ord_0 G = " + std::to_string(chk.order_at_zero));
    } catch (const IntegralityError& e) {
      cx.verdict("reduced point", Status::data, std::string("precondition fails: ") + e.what());
    }
  }
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
}

void cmd_reduce(Context& cx) {
  const auto& f = cx.f();
  const FqCtxPtr& ctx = cx.cfg.ctx;
  const json& p = cx.params();
  std::vector<Place> places;
  if (p.contains("places")) {
    for (const auto& s : param<std::vector<std::string>>(p, "places", {})) places.push_back(parse_place(ctx, s));
  } else {
    const auto k = param<std::uint32_t>(p, "max_residue_degree", 1);
    for (std::uint32_t deg = 1; deg <= k; ++deg)
      for (const auto& g : monic_irreducibles(ctx, deg)) places.push_back(Place::finite(g));
    places.push_back(Place::infinity(ctx));
  }
  Csv csv({"place", "residue_degree", "status", "s1", "s2", "pigeonhole_bound", "shifted"});
  json rows = json::array();
  std::size_t checked = 0, bad = 0, skipped = 0;
  for (const auto& v : places) {
    try {
      const ReductionReport rep = reduce_and_shift(f, cx.point(), v);
      // Independent recheck of Q = F^{s2} P - F^{s1} P against the orbit.
      const auto pts = orbit(f, cx.point(), rep.s2);
      bool ok = rep.s1 < rep.s2 && rep.s2 <= rep.pigeonhole_bound && rep.shifted == pts[rep.s2] - pts[rep.s1];
      for (const auto& c : rep.shifted.coords) ok = ok && valuation(c, v) >= 1;
      ok = ok && rep.verified;
      ++checked;
      if (!ok) ++bad;
      csv.row({v.to_string(), std::to_string(v.residue_degree()), ok ? "ok" : "FAILED", std::to_string(rep.s1),
               std::to_string(rep.s2), std::to_string(rep.pigeonhole_bound), rep.shifted.to_string()});
      json r = reduction_json(rep);
      r["status"] = ok ? "ok" : "failed";
      rows.push_back(std::move(r));
    } catch (const IntegralityError& e) {
      ++skipped;
      csv.row({v.to_string(), std::to_string(v.residue_degree()), "not integral", "", "", "", ""});
      rows.push_back({{"place", v.to_string()}, {"status", "not integral"}, {"reason", e.what()}});
    }
  }
  json j = cx.header();
  j["point"] = cx.point().to_string();
  j["places"] = std::move(rows);
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  const std::string detail = std::to_string(checked) + " places checked, " + std::to_string(bad) + " failures, " +
                             std::to_string(skipped) + " skipped for integrality";
  if (checked == 0) {
    cx.verdict("pigeonhole reduction", Status::data, detail);
  } else {
    cx.check("pigeonhole reduction", bad == 0, detail);
  }
}

void cmd_stability(Context& cx) {
  const auto& f = cx.f();
  if (!cx.params().contains("pi")) throw ConfigError("stability needs a 'pi' operator literal");
  const TwistedOperator pi = parse_operator_literal(cx.params().at("pi"), cx.cfg.ctx, f.in_dim());
  const StabilityResult res = stability_check(pi, f);
  json j = cx.header();
  j["pi"] = pi.to_string();
  j["stable"] = res.stable;
  j["witness"] = res.witness;
  Csv csv({"stable", "reduced", "witness"});
  if (res.stable) {
    j["reduced"] = res.reduced->to_string();
    // Recheck the factorization independently of the solver.
    const bool ok = compose(pi, f) == compose(*res.reduced, pi);
    cx.check("pi o F = F' o pi", ok, "F' = " + res.reduced->to_string());
  }
  csv.row({res.stable ? "1" : "0", res.reduced ? res.reduced->to_string() : "", res.witness});
  cx.verdict("stability under F", Status::data, res.stable ? "stable" : "not stable: " + res.witness);
  if (cx.params().contains("expect")) {
    const auto want = param<std::string>(cx.params(), "expect", "");
    if (want != "stable" && want != "not_stable") throw ConfigError("expect must be 'stable' or 'not_stable'");
    cx.check("stability matches the expected answer", (want == "stable") == res.stable, "expected " + want);
  }
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
}

void cmd_gamma(Context& cx) {
  const auto s = param<std::size_t>(cx.params(), "S", 2);
  const GammaSet g = gamma_set(cx.f(), cx.point(), s);
  Csv csv({"index", "point", height_column(cx.cfg.ctx)});
  json pts = json::array();
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const auto h = height_tuple(g.points[i].coords).value;
    csv.row({std::to_string(i), g.points[i].to_string(), std::to_string(h)});
    pts.push_back({{"point", g.points[i].to_string()}, {"height", h}});
  }
  json j = cx.header();
  j["S"] = s;
  j["combinations"] = g.combinations;
  j["torsion_free"] = g.torsion_free();
  j["points"] = std::move(pts);
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.verdict("Gamma(S, P)", Status::data,
             std::to_string(g.points.size()) + " distinct points from " + std::to_string(g.combinations) + " combinations");
}

void cmd_preperiodic(Context& cx) {
  const auto n_max = param<std::size_t>(cx.params(), "n_max", 20);
  const auto cap = param<std::int64_t>(cx.params(), "height_cap", 10000);
  const PreperiodicityResult res = preperiodicity_probe(cx.f(), cx.point(), n_max, cap);
  const std::string kind = PreperiodicityResult::name(res.kind);
  Csv csv({"n", height_column(cx.cfg.ctx)});
  for (std::size_t n = 0; n < res.heights.size(); ++n) csv.row({std::to_string(n), std::to_string(res.heights[n])});
  json j = cx.header();
  j["kind"] = kind;
  j["preperiod"] = res.preperiod;
  j["period"] = res.period;
  j["escape_index"] = res.escape_index;
  j["heights"] = res.heights;
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.verdict("preperiodicity", Status::data, kind);
  if (cx.params().contains("expect")) {
    const auto want = param<std::string>(cx.params(), "expect", "");
    cx.check("preperiodicity matches the expected answer", want == kind, "expected " + want + ", found " + kind);
  }
}

void cmd_product_formula(Context& cx) {
  const FqCtxPtr& ctx = cx.cfg.ctx;
  const auto count = param<std::size_t>(cx.params(), "count", 100);
  const auto max_degree = param<std::uint64_t>(cx.params(), "max_degree", 6);
  std::vector<RatFunc> elems;
  auto rng = stream(cx.cfg.seed, 3);
  for (std::size_t i = 0; i < count; ++i) elems.push_back(draw_ratfunc(ctx, rng, max_degree, true));
  std::size_t exhaustive = 0;
  if (cx.params().contains("exhaustive_degree")) {
    const auto polys = all_polys(ctx, param<std::uint64_t>(cx.params(), "exhaustive_degree", 0));
    for (const auto& num : polys)
      for (const auto& den : polys)
        if (!num.is_zero() && !den.is_zero() && den.lead() == 1) {
          elems.push_back(RatFunc::make(num, den));
          ++exhaustive;
        }
  }
  Csv csv({"index", "element", "places", "degree_sum", "holds"});
  std::size_t bad = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const bool ok = product_formula_check(elems[i]);
    if (!ok) ++bad;
    csv.row({std::to_string(i), elems[i].to_string(), std::to_string(support(elems[i]).size()),
             std::to_string(degree_sum(elems[i])), ok ? "1" : "0"});
  }
  json j = cx.header();
  j["count"] = count;
  j["exhaustive"] = exhaustive;
  j["failures"] = bad;
  cx.out.csv = csv.str();
  cx.out.json = std::move(j);
  cx.check("sum over places of ord_v(a) deg v = 0", bad == 0 && !elems.empty(),
           std::to_string(elems.size()) + " elements (" + std::to_string(exhaustive) + " exhaustive), " +
               std::to_string(bad) + " failures");
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"delta", cmd_delta},       {"delta-lambda", cmd_delta_lambda}, {"alpha", cmd_alpha},
      {"orbit", cmd_orbit},       {"height", cmd_height},             {"truncbound", cmd_truncbound},
      {"kappa", cmd_kappa},       {"siegel-demo", cmd_siegel_demo},   {"aux-build", cmd_aux_build},
      {"reduce", cmd_reduce},     {"stability", cmd_stability},       {"gamma", cmd_gamma},
      {"preperiodic", cmd_preperiodic}, {"product-formula", cmd_product_formula}};
  return h;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

// ---------------------------------------------------------------- public

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"delta",      "delta-lambda", "alpha",      "orbit",     "height",
                                              "truncbound", "kappa",        "siegel-demo", "aux-build", "reduce",
                                              "stability",  "gamma",        "preperiodic", "product-formula"};
  return names;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    default:
      return "data";
  }
}

json to_json(const VerdictRecord& v) {
  return {{"experiment", v.experiment}, {"command", v.command}, {"anchor", v.anchor},
          {"status", status_name(v.status)}, {"detail", v.detail}, {"artifacts", v.artifacts}};
}

TwistedOperator make_preset(std::string_view call, const FqCtxPtr& field) {
  const auto open = call.find('(');
  if (open == std::string_view::npos || call.back() != ')') throw ConfigError("preset '" + std::string(call) + "' needs arguments");
  const std::string name(call.substr(0, open));
  const auto args = split_args(call.substr(open + 1, call.size() - open - 2));
  std::vector<std::uint64_t> v;
  for (const auto& a : args) v.push_back(parse_uint(a, "preset argument"));
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw ConfigError(name + " takes " + std::to_string(n) + " arguments");
  };

  if (name == "carlitz" || name == "carlitz-tensor") {
    need(name == "carlitz" ? 1 : 2);
    const FqCtxPtr ctx = field_for(v[0], field);
    const std::size_t d = name == "carlitz" ? 1 : v[1];
    if (d == 0 || d > 16) throw ConfigError("carlitz-tensor needs 1 <= d <= 16");
    KMatrix a0(ctx, d, d), a1(ctx, d, d);
    for (std::size_t i = 0; i < d; ++i) {
      a0.at(i, i) = RatFunc::T(ctx);
      if (i + 1 < d) a0.at(i, i + 1) = RatFunc::constant(ctx, 1);
    }
    a1.at(d - 1, 0) = RatFunc::constant(ctx, 1);
    return TwistedOperator(ctx, d, d, {a0, a1});
  }
  if (name == "diagonal") {
    if (v.empty() || v.size() > 16) throw ConfigError("diagonal takes between 1 and 16 arguments");
    std::uint64_t p = 0;
    for (auto q : v)
      if (q > 1 && !p) p = smallest_prime_factor(q);
    if (field) p = field->p();
    if (!p) p = 2;
    const FqCtxPtr ctx = field_for(p, field);
    std::vector<std::size_t> k(v.size());
    std::size_t top = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::uint64_t q = v[i];
      if (q == 0) throw ConfigError("diagonal degrees must be powers of p");
      while (q % p == 0) {
        q /= p;
        ++k[i];
      }
      if (q != 1) throw ConfigError("diagonal degree " + std::to_string(v[i]) + " is not a power of " + std::to_string(p));
      top = std::max(top, k[i]);
    }
    std::vector<KMatrix> coeffs(top + 1, KMatrix(ctx, v.size(), v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) coeffs[k[i]].at(i, i) = RatFunc::constant(ctx, 1);
    return TwistedOperator(ctx, v.size(), v.size(), std::move(coeffs));
  }
  if (name == "random") {
    need(4);
    const FqCtxPtr ctx = field_for(v[0], field);
    const std::size_t d = v[1], r = v[2];
    if (d == 0 || d > 8 || r > 8) throw ConfigError("random needs 1 <= d <= 8 and r <= 8");
    auto rng = stream(v[3], 0);
    std::vector<KMatrix> coeffs;
    for (std::size_t i = 0; i <= r; ++i) {
      KMatrix m(ctx, d, d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) m.at(a, b) = RatFunc(draw_poly(ctx, rng, 2, false));
      coeffs.push_back(std::move(m));
    }
    if (coeffs.back().is_zero()) coeffs.back().at(0, 0) = RatFunc::constant(ctx, 1);
    return TwistedOperator(ctx, d, d, std::move(coeffs));
  }
  throw ConfigError("unknown preset '" + name + "'");
}

TwistedOperator parse_operator_literal(const json& lit, const FqCtxPtr& ctx, std::size_t width) {
  if (!lit.is_object() || !lit.contains("A") || !lit.at("A").is_array())
    throw ConfigError("operator literal needs an 'A' list of matrices");
  std::size_t d = width;
  if (lit.contains("d")) {
    if (!lit.at("d").is_number_unsigned()) throw ConfigError("operator literal 'd' must be a positive integer");
    d = lit.at("d").get<std::size_t>();
    if (width && d != width) throw ConfigError("operator literal has width " + std::to_string(d) + ", expected " + std::to_string(width));
  }
  if (d == 0) throw ConfigError("operator literal needs 'd'");
  const json& mats = lit.at("A");
  if (mats.empty()) throw ConfigError("operator literal has no matrices");
  std::size_t e = 0;
  std::vector<KMatrix> coeffs;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const json& m = mats[i];
    const std::string where = "A[" + std::to_string(i) + "]";
    if (!m.is_array() || m.empty()) throw ConfigError(where + " must be a nonempty list");
    std::vector<std::pair<const json*, std::string>> flat;
    if (m[0].is_array()) {
      for (std::size_t r = 0; r < m.size(); ++r) {
        if (!m[r].is_array() || m[r].size() != d) throw ConfigError(where + " row " + std::to_string(r) + " must have " + std::to_string(d) + " entries");
        for (std::size_t c = 0; c < d; ++c)
          flat.emplace_back(&m[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    } else {
      if (m.size() % d != 0) throw ConfigError(where + " has " + std::to_string(m.size()) + " entries, not a multiple of " + std::to_string(d));
      for (std::size_t k = 0; k < m.size(); ++k) flat.emplace_back(&m[k], where + "[" + std::to_string(k) + "]");
    }
    const std::size_t rows = flat.size() / d;
    if (e == 0) e = rows;
    if (rows != e) throw ConfigError(where + " has " + std::to_string(rows) + " rows, expected " + std::to_string(e));
    KMatrix km(ctx, e, d);
    for (std::size_t k = 0; k < flat.size(); ++k) km.at(k / d, k % d) = parse_entry(ctx, *flat[k].first, flat[k].second);
    coeffs.push_back(std::move(km));
  }
  return TwistedOperator(ctx, e, d, std::move(coeffs));
}

ExperimentConfig parse_config(std::string_view text, const std::string& command, std::optional<std::uint64_t> seed) {
  if (!handlers().count(command)) throw ConfigError("unknown subcommand '" + command + "'");
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError("config is not valid JSON at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.seed = seed ? *seed : param<std::uint64_t>(root, "seed", 0);

  FqCtxPtr field;
  if (root.contains("field")) {
    const json& fj = root.at("field");
    const auto p = param<std::uint64_t>(fj, "p", 0);
    if (p < 2 || smallest_prime_factor(p) != p || p > 65521) throw ConfigError("field.p must be a prime");
    try {
      field = fj.contains("modulus")
                  ? FqCtx::make(static_cast<std::uint32_t>(p), param<std::vector<std::uint32_t>>(fj, "modulus", {}))
                  : FqCtx::prime(static_cast<std::uint32_t>(p));
    } catch (const FieldError& e) {
      throw ConfigError(std::string("field: ") + e.what());
    }
  }
  if (root.contains("module")) {
    const json& mj = root.at("module");
    if (mj.is_string()) {
      cfg.module_label = mj.get<std::string>();
      cfg.f = make_preset(cfg.module_label, field);
    } else {
      if (!field) throw ConfigError("an operator literal needs a 'field'");
      cfg.module_label = "literal";
      cfg.f = parse_operator_literal(mj, field);
      if (!cfg.f->is_square()) throw ConfigError("module must be square");
    }
    if (cfg.f->is_zero()) throw ConfigError("module is the zero operator");
    field = cfg.f->ctx();
  }
  if (!field) throw ConfigError("config needs a 'field' or a 'module'");
  cfg.ctx = field;

  if (cfg.f) {
    const std::size_t d = cfg.f->in_dim();
    auto rng = stream(cfg.seed, 4);
    if (!root.contains("point")) {
      cfg.point = PointK{std::vector<RatFunc>(d, RatFunc::constant(field, 1))};
    } else if (root.at("point").is_string() && root.at("point").get<std::string>() == "random") {
      PointK pt;
      for (std::size_t i = 0; i < d; ++i) pt.coords.push_back(RatFunc(draw_poly(field, rng, 2, true)));
      cfg.point = pt;
    } else {
      const json& pj = root.at("point");
      if (!pj.is_array() || pj.size() != d) throw ConfigError("point must list " + std::to_string(d) + " coordinates");
      PointK pt;
      for (std::size_t i = 0; i < d; ++i) pt.coords.push_back(parse_entry(field, pj[i], "point[" + std::to_string(i) + "]"));
      cfg.point = pt;
    }
    if (!root.contains("lambda")) {
      KMatrix row(field, 1, d);
      row.at(0, 0) = RatFunc::constant(field, 1);
      cfg.lambda = TwistedOperator(field, 1, d, {row});
    } else if (root.at("lambda").is_string() && root.at("lambda").get<std::string>() == "random") {
      KMatrix row(field, 1, d);
      while (row.is_zero())
        for (std::size_t i = 0; i < d; ++i) row.at(0, i) = RatFunc(draw_poly(field, rng, 1, false));
      cfg.lambda = TwistedOperator(field, 1, d, {row});
      cfg.lambda_given = true;
    } else {
      cfg.lambda = parse_operator_literal(root.at("lambda"), field, d);
      if (cfg.lambda->out_dim() != 1) throw ConfigError("lambda must have one row");
      if (cfg.lambda->is_zero()) throw ConfigError("lambda is zero");
      cfg.lambda_given = true;
    }
  }
  cfg.id = param<std::string>(root, "id", cfg.module_label.empty() ? "experiment" : cfg.module_label);
  if (root.contains("params")) {
    if (!root.at("params").is_object()) throw ConfigError("params must be an object");
    cfg.params = root.at("params");
  }
  if (root.contains(command)) {
    if (!root.at(command).is_object()) throw ConfigError("'" + command + "' must be an object");
    for (const auto& [k, v] : root.at(command).items()) cfg.params[k] = v;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& command,
                             std::optional<std::uint64_t> seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command, seed);
}

RunResult execute(const std::string& command, const ExperimentConfig& config) {
  auto it = handlers().find(command);
  if (it == handlers().end()) throw ConfigError("unknown subcommand '" + command + "'");
  RunResult out;
  Context cx{config, command, out};
  it->second(cx);
  return out;
}

std::vector<VerdictRecord> run(const std::string& command, const ExperimentConfig& config,
                               const std::filesystem::path& out_dir) {
  RunResult res = execute(command, config);
  std::filesystem::create_directories(out_dir);
  const std::string csv_name = command + ".csv", json_name = command + ".json";
  for (auto& v : res.verdicts) v.artifacts = {csv_name, json_name};
  res.json["verdicts"] = json::array();
  for (const auto& v : res.verdicts) res.json["verdicts"].push_back(to_json(v));
  {
    std::ofstream csv(out_dir / csv_name, std::ios::binary | std::ios::trunc);
    csv << res.csv;
    std::ofstream js(out_dir / json_name, std::ios::binary | std::ios::trunc);
    js << res.json.dump(2) << '\n';
    if (!csv || !js) throw std::runtime_error("cannot write artifacts in " + out_dir.string());
  }
  json all = json::array();
  const auto verdict_path = out_dir / "verdicts.json";
  if (std::filesystem::exists(verdict_path)) {
    std::ifstream in(verdict_path, std::ios::binary);
    try {
      json old = json::parse(in);
      for (const auto& v : old.value("verdicts", json::array()))
        if (v.value("command", "") != command || v.value("experiment", "") != config.id) all.push_back(v);
    } catch (const json::exception&) {
      // An unreadable verdict file is replaced.
    }
  }
  for (const auto& v : res.verdicts) all.push_back(to_json(v));
  std::stable_sort(all.begin(), all.end(), [](const json& a, const json& b) {
    return std::make_pair(a.value("command", ""), a.value("experiment", "")) <
           std::make_pair(b.value("command", ""), b.value("experiment", ""));
  });
  std::ofstream vs(verdict_path, std::ios::binary | std::ios::trunc);
  vs << json{{"verdicts", all}}.dump(2) << '\n';
  if (!vs) throw std::runtime_error("cannot write " + verdict_path.string());
  return res.verdicts;
}

bool any_failed(const std::vector<VerdictRecord>& verdicts) {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const VerdictRecord& v) { return v.status == Status::fail; });
}

}  // namespace tmlab::harness
