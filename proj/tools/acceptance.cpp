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

// Acceptance suite: drives the tmlab CLI on pinned configurations, reads the
// artifacts back and checks them against oracles computed here with a small
// dense F_p[T] toolkit that shares no code with the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Dense polynomials over a prime field, coefficients low to high.

using Poly = std::vector<std::int64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::int64_t deg(const Poly& a) { return a.empty() ? -1 : static_cast<std::int64_t>(a.size()) - 1; }

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

Poly add(const Poly& a, const Poly& b, std::int64_t p, std::int64_t sign = 1) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] + sign * b[i]) % p + p) % p;
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j]) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

// a = q b + r
std::pair<Poly, Poly> divmod(Poly a, const Poly& b, std::int64_t p) {
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  const std::int64_t li = inv_mod(b.back(), p);
  while (deg(a) >= deg(b)) {
    const std::size_t shift = a.size() - b.size();
    const std::int64_t c = a.back() * li % p;
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = ((a[shift + j] - c * b[j]) % p + p) % p;
    trim(a);
  }
  trim(q);
  return {q, a};
}

Poly gcd(Poly a, Poly b, std::int64_t p) {
  while (!b.empty()) {
    Poly r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::int64_t li = inv_mod(a.back(), p);
    for (auto& c : a) c = c * li % p;
  }
  return a;
}

// f(T)^(p^k) = f(T^(p^k)) for coefficients in F_p.
Poly frobenius(const Poly& a, std::int64_t p, unsigned k) {
  if (a.empty()) return {};
  std::size_t step = 1;
  for (unsigned i = 0; i < k; ++i) step *= static_cast<std::size_t>(p);
  Poly r((a.size() - 1) * step + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i * step] = a[i];
  return r;
}

Poly pow(const Poly& a, std::uint64_t e, std::int64_t p) {
  Poly r{1}, b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b, p);
    e >>= 1;
    if (e) b = mul(b, b, p);
  }
  return r;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// "2*T^3 + T + 1" style, as printed by the CLI.
Poly parse_poly(const std::string& text, std::int64_t p) {
  std::string s = trimmed(text);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  Poly r;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, '+')) {
    term = trimmed(term);
    if (term.empty()) throw std::invalid_argument("empty term in '" + text + "'");
    std::int64_t c = 1;
    std::size_t e = 0;
    const auto t = term.find('T');
    if (t == std::string::npos) {
      c = std::stoll(term);
    } else {
      if (t > 0) {
        std::string cs = term.substr(0, t);
        if (cs.back() != '*') throw std::invalid_argument("bad term '" + term + "'");
        c = std::stoll(cs.substr(0, cs.size() - 1));
      }
      const auto hat = term.find('^', t);
      e = hat == std::string::npos ? 1 : std::stoull(term.substr(hat + 1));
    }
    if (r.size() <= e) r.resize(e + 1, 0);
    r[e] = ((r[e] + c) % p + p) % p;
  }
  trim(r);
  return r;
}

struct Rat {
  Poly num, den;
};

Rat parse_rat(const std::string& text, std::int64_t p) {
  const std::string s = trimmed(text);
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '/' && depth == 0) return {parse_poly(s.substr(0, i), p), parse_poly(s.substr(i + 1), p)};
  }
  return {parse_poly(s, p), Poly{1}};
}

// "[a, b, c]"
std::vector<Rat> parse_point(const std::string& text, std::int64_t p) {
  const std::string s = trimmed(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("bad point '" + text + "'");
  std::vector<Rat> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rat(item, p));
  return out;
}

bool is_poly(const Rat& r) { return r.den == Poly{1}; }

// Affine height of (1 : a_1 : ... : a_n) in units of log q, after reduction.
std::int64_t height_oracle(const std::vector<Rat>& tuple, std::int64_t p) {
  std::vector<Rat> reduced;
  Poly l{1};
  for (const auto& a : tuple) {
    if (a.num.empty()) continue;
    const Poly g = gcd(a.num, a.den, p);
    Rat r{divmod(a.num, g, p).first, divmod(a.den, g, p).first};
    l = divmod(mul(l, r.den, p), gcd(l, r.den, p), p).first;
    reduced.push_back(std::move(r));
  }
  std::int64_t h = deg(l);
  for (const auto& r : reduced) h = std::max(h, deg(r.num) + deg(l) - deg(r.den));
  return h;
}

std::int64_t valuation_at(const Poly& a, const Poly& v, std::int64_t p) {
  if (a.empty()) return INT64_MAX;
  std::int64_t k = 0;
  Poly cur = a;
  for (;;) {
    auto [q, r] = divmod(cur, v, p);
    if (!r.empty()) return k;
    cur = std::move(q);
    ++k;
  }
}

// ---------------------------------------------------------------------------
// Twisted operators with polynomial matrix coefficients: sum_i A_i tau^i.

using Mat = std::vector<std::vector<Poly>>;
using Op = std::vector<Mat>;

Mat zero_mat(std::size_t rows, std::size_t cols) { return Mat(rows, std::vector<Poly>(cols)); }

Op compose(const Op& f, const Op& g, std::int64_t p) {
  const std::size_t rows = f[0].size(), inner = g[0].size(), cols = g[0][0].size();
  Op out(f.size() + g.size() - 1, zero_mat(rows, cols));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t k = 0; k < inner; ++k) {
          if (f[i][a][k].empty()) continue;
          for (std::size_t b = 0; b < cols; ++b) {
            if (g[j][k][b].empty()) continue;
            out[i + j][a][b] =
                add(out[i + j][a][b], mul(f[i][a][k], frobenius(g[j][k][b], p, static_cast<unsigned>(i)), p), p);
          }
        }
  while (out.size() > 1) {
    bool zero = true;
    for (const auto& row : out.back())
      for (const auto& e : row) zero = zero && e.empty();
    if (!zero) break;
    out.pop_back();
  }
  return out;
}

std::vector<Poly> evaluate(const Op& f, const std::vector<Poly>& x, std::int64_t p) {
  std::vector<Poly> y(f[0].size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t a = 0; a < y.size(); ++a)
      for (std::size_t k = 0; k < x.size(); ++k)
        y[a] = add(y[a], mul(f[i][a][k], frobenius(x[k], p, static_cast<unsigned>(i)), p), p);
  return y;
}

std::int64_t mat_height(const Mat& m) {
  std::int64_t h = 0;
  for (const auto& row : m)
    for (const auto& e : row) h = std::max(h, deg(e));
  return h;
}

struct Preset {
  std::string call;
  std::int64_t p;
  Op op;
};

Preset carlitz(std::int64_t p) {
  return {"carlitz(" + std::to_string(p) + ")", p, Op{Mat{{Poly{0, 1}}}, Mat{{Poly{1}}}}};
}

// A_0 = T I + superdiagonal ones, A_1 = E_{d,1}.
Preset carlitz_tensor(std::int64_t p, std::size_t d) {
  Op op{zero_mat(d, d), zero_mat(d, d)};
  for (std::size_t i = 0; i < d; ++i) {
    op[0][i][i] = Poly{0, 1};
    if (i + 1 < d) op[0][i][i + 1] = Poly{1};
  }
  op[1][d - 1][0] = Poly{1};
  return {"carlitz-tensor(" + std::to_string(p) + "," + std::to_string(d) + ")", p, op};
}

// Coordinate i raised to q_i = p^(k_i).
Preset diagonal(std::int64_t p, const std::vector<unsigned>& k) {
  const std::size_t d = k.size();
  Op op(*std::max_element(k.begin(), k.end()) + 1, zero_mat(d, d));
  std::string call = "diagonal(";
  for (std::size_t i = 0; i < d; ++i) {
    op[k[i]][i][i] = Poly{1};
    std::int64_t q = 1;
    for (unsigned e = 0; e < k[i]; ++e) q *= p;
    call += (i ? "," : "") + std::to_string(q);
  }
  return {call + ")", p, op};
}

std::vector<Preset> presets() {
  return {carlitz(2),           carlitz(3),           carlitz_tensor(2, 2),      carlitz_tensor(3, 2),
          carlitz_tensor(2, 3), diagonal(2, {1, 2}),  diagonal(3, {1, 2})};
}

// Test point P_i = T + i (coefficients reduced mod p).
std::vector<Poly> preset_point(const Preset& pr) {
  std::vector<Poly> pt;
  for (std::size_t i = 0; i < pr.op[0].size(); ++i) pt.push_back(Poly{static_cast<std::int64_t>(i) % pr.p, 1});
  return pt;
}

json point_json(const std::vector<Poly>& pt) {
  json out = json::array();
  for (const auto& c : pt) {
    std::string s;
    for (std::size_t e = c.size(); e-- > 0;) {
      if (!c[e]) continue;
      if (!s.empty()) s += " + ";
      if (e == 0) s += std::to_string(c[e]);
      else s += (c[e] == 1 ? "" : std::to_string(c[e]) + "*") + "T" + (e > 1 ? "^" + std::to_string(e) : "");
    }
    out.push_back(s.empty() ? "0" : s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CLI driver.

struct Outcome {
  bool ok = false;
  std::string detail;
};

class Driver {
 public:
  Driver(std::string cli, fs::path root) : cli_(std::move(cli)), root_(std::move(root)) {
    fs::create_directories(root_ / "configs");
    fs::create_directories(root_ / "logs");
  }

  const fs::path& root() const { return root_; }

  // Writes the config and runs each command into out/<name>. Returns the exit
  // codes and accumulates wall time in seconds.
  std::map<std::string, int> run(const std::string& name, const json& cfg, const std::vector<std::string>& cmds,
                                 double* seconds = nullptr) {
    const fs::path cfg_path = root_ / "configs" / (name + ".json");
    std::ofstream(cfg_path) << cfg.dump(2) << '\n';
    std::map<std::string, int> codes;
    for (const auto& c : cmds) {
      const fs::path log = root_ / "logs" / (name + "." + c + ".log");
      const std::string line = "\"" + cli_ + "\" " + c + " --config \"" + cfg_path.string() + "\" --out \"" +
                               out(name).string() + "\" > \"" + log.string() + "\" 2>&1";
      const auto t0 = std::chrono::steady_clock::now();
      const int raw = std::system(line.c_str());
      const auto t1 = std::chrono::steady_clock::now();
      if (seconds) *seconds += std::chrono::duration<double>(t1 - t0).count();
      codes[c] = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : 128);
    }
    return codes;
  }

  fs::path out(const std::string& name) const { return root_ / "out" / name; }

  json artifact(const std::string& name, const std::string& cmd) const {
    std::ifstream in(out(name) / (cmd + ".json"));
    if (!in) throw std::runtime_error("missing artifact " + name + "/" + cmd + ".json");
    return json::parse(in);
  }

  std::string csv(const std::string& name, const std::string& cmd) const {
    std::ifstream in(out(name) / (cmd + ".csv"));
    if (!in) throw std::runtime_error("missing artifact " + name + "/" + cmd + ".csv");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  std::string cli_;
  fs::path root_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

bool all_pass(const json& artifact) {
  for (const auto& v : artifact.at("verdicts"))
    if (v.at("status") == "fail") return false;
  return true;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// The suite. run_all() performs every CLI invocation; the criteria only read
// artifacts, so the second run for the determinism check repeats run_all().

struct RandomModule {
  std::string name;
  json cfg;
};

std::vector<RandomModule> random_family(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RandomModule> out;
  for (int k = 0; k < 20; ++k) {
    const int p = rng() % 2 ? 3 : 2;
    const int d = 1 + static_cast<int>(rng() % 3);
    const int r = 1 + static_cast<int>(rng() % 2);
    const auto s = rng() % 100000;
    const std::string call =
        "random(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(r) + "," + std::to_string(s) + ")";
    json cfg = {{"id", "random-" + std::to_string(k)},
                {"module", call},
                {"point", "random"},
                {"lambda", "random"},
                {"seed", k},
                {"alpha", {{"n_max", 10}, {"root_factor", 1.25}, {"root_from", 8}}},
                {"truncbound", {{"n_max", 10}}}};
    out.push_back({"random-" + std::to_string(k), cfg});
  }
  return out;
}

struct Timings {
  double carlitz = 0, tensor = 0, kappa = 0;
};

struct Suite {
  Driver& drv;
  std::uint64_t seed;
  Timings time{};
  std::map<std::string, std::map<std::string, int>> codes{};

  void run_all() {
    codes.clear();
    time = {};
    codes["carlitz"] = drv.run("carlitz",
                               {{"id", "carlitz-3"},
                                {"module", "carlitz(3)"},
                                {"point", {"1"}},
                                {"orbit", {{"n", 3}}},
                                {"delta", {{"n_max", 8}, {"expect_rate", "1"}}}},
                               {"orbit", "delta"}, &time.carlitz);
    codes["tensor"] = drv.run("tensor",
                              {{"id", "carlitz-tensor-2-2"},
                               {"module", "carlitz-tensor(2,2)"},
                               {"point", {"1", "T"}},
                               {"delta", {{"n_max", 12}, {"expect_rate", "1/2"}}}},
                              {"delta"}, &time.tensor);
    for (const auto& m : random_family(seed)) codes[m.name] = drv.run(m.name, m.cfg, {"alpha", "truncbound"});
    for (const auto& pr : presets()) {
      json cfg = {{"id", pr.call},
                  {"module", pr.call},
                  {"point", point_json(preset_point(pr))},
                  {"truncbound", {{"n_max", 10}}},
                  {"reduce", {{"max_residue_degree", 2}}}};
      codes[pr.call] = drv.run(pr.call, cfg, {"truncbound", "reduce"});
    }
    codes["field-2"] = drv.run("field-2",
                               {{"id", "f2"},
                                {"field", {{"p", 2}}},
                                {"seed", seed},
                                {"product-formula", {{"count", 500}, {"max_degree", 6}, {"exhaustive_degree", 3}}},
                                {"height", {{"count", 500}, {"max_degree", 6}, {"exhaustive_degree", 4}}},
                                {"siegel-demo", {{"count", 50}, {"rows_max", 3}, {"cols_max", 8}, {"max_degree", 2}}}},
                               {"product-formula", "height", "siegel-demo"});
    codes["field-3"] = drv.run("field-3",
                               {{"id", "f3"},
                                {"field", {{"p", 3}}},
                                {"seed", seed + 1},
                                {"product-formula", {{"count", 500}, {"max_degree", 6}}},
                                {"height", {{"count", 500}, {"max_degree", 6}}}},
                               {"product-formula", "height"});
    codes["diagonal"] = drv.run(
        "diagonal",
        {{"id", "diagonal-2-4"}, {"module", "diagonal(2,4)"}, {"kappa", {{"N_max", 3}, {"L", {1, 2, 3}}}}},
        {"kappa"}, &time.kappa);
    codes["aux"] = drv.run("aux",
                           {{"id", "carlitz-2-aux"},
                            {"module", "carlitz(2)"},
                            {"point", {"1"}},
                            {"aux-build",
                             {{"N", 3},
                              {"delta_lambda", "1"},
                              {"param_set",
                               {{"delta1", "19/10"},
                                {"delta2", "17/10"},
                                {"delta3", "8/5"},
                                {"delta4", "3/2"},
                                {"delta_plus", "5/2"}}},
                              {"min_target", 8},
                              {"place", "T"},
                              {"max_index", 3}}}},
                           {"aux-build"});
    codes["stable"] = drv.run("stable",
                              {{"id", "upper-triangular"},
                               {"field", {{"p", 3}}},
                               {"module", stable_literal(false)},
                               {"stability", {{"pi", projection()}, {"expect", "stable"}}}},
                              {"stability"});
    codes["unstable"] = drv.run("unstable",
                                {{"id", "perturbed"},
                                 {"field", {{"p", 3}}},
                                 {"module", stable_literal(true)},
                                 {"stability", {{"pi", projection()}, {"expect", "not_stable"}}}},
                                {"stability"});
  }

  // Onto the second coordinate.
  static json projection() { return json::parse(R"({"A": [["0", "1"]]})"); }

  // Upper triangular over F_3(T); the perturbation puts a 1 in the (2,1)
  // entry of A_1.
  static json stable_literal(bool perturbed) {
    json lit = json::parse(R"({"d": 2, "A": [[["T", "1"], ["0", "T^2"]], [["1", "T"], ["0", "1"]]]})");
    if (perturbed) lit["A"][1][1][0] = "1";
    return lit;
  }
  static Op stable_op(bool perturbed) {
    return Op{Mat{{Poly{0, 1}, Poly{1}}, {Poly{}, Poly{0, 0, 1}}},
              Mat{{Poly{1}, Poly{0, 1}}, {perturbed ? Poly{1} : Poly{}, Poly{1}}}};
  }

  bool exited(const std::string& name, const std::string& cmd, int expected = 0) const {
    const auto it = codes.find(name);
    return it != codes.end() && it->second.count(cmd) && it->second.at(cmd) == expected;
  }
};

// 1. Carlitz over F_3(T), P = 1.
Outcome carlitz_orbit(const Suite& s) {
  const std::int64_t p = 3;
  const Preset pr = carlitz(p);
  std::vector<Poly> x{Poly{1}};
  const json orbit = s.drv.artifact("carlitz", "orbit");
  const json delta = s.drv.artifact("carlitz", "delta");
  std::vector<std::int64_t> got;
  for (int n = 1; n <= 3; ++n) {
    x = evaluate(pr.op, x, p);
    const json& row = orbit.at("rows").at(n);
    const auto pt = parse_point(row.at("point"), p);
    if (pt.size() != 1 || !is_poly(pt[0]) || pt[0].num != x[0])
      return {false, "F^" + std::to_string(n) + "(1) differs from hand iteration"};
    if (row.at("height") != deg(x[0])) return {false, "height mismatch at n = " + std::to_string(n)};
    got.push_back(row.at("height"));
  }
  if (got != std::vector<std::int64_t>{1, 3, 9}) return {false, "heights are not 1, 3, 9"};
  if (delta.at("exact_rate").at("rate") != "1" || std::abs(delta.at("delta").get<double>() - 3.0) > 1e-12)
    return {false, "exact rate " + delta.at("exact_rate").dump()};
  if (!s.exited("carlitz", "orbit") || !s.exited("carlitz", "delta") || !all_pass(delta))
    return {false, "CLI reported a failure"};
  if (s.time.carlitz >= 1.0) return {false, "took " + fmt(s.time.carlitz) + " s"};
  return {true, "heights 1, 3, 9; rate 1; " + fmt(s.time.carlitz) + " s"};
}

// 2. C^(x)2 over F_2(T): tau-degrees eventually arithmetic with slope 1/2.
Outcome tensor_rate(const Suite& s) {
  const std::int64_t p = 2;
  const Preset pr = carlitz_tensor(p, 2);
  const json delta = s.drv.artifact("tensor", "delta");
  const json& rows = delta.at("rows");
  if (rows.size() != 13) return {false, "expected rows n = 0..12"};
  Op it{Mat{{Poly{1}, Poly{}}, {Poly{}, Poly{1}}}};
  std::vector<std::int64_t> t;
  for (int n = 0; n <= 12; ++n) {
    if (n > 0) it = compose(pr.op, it, p);
    t.push_back(static_cast<std::int64_t>(it.size()) - 1);
    if (rows.at(n).at("tau_degree") != t.back())
      return {false, "tau-degree of F^" + std::to_string(n) + " differs from the composition oracle"};
  }
  // Slope 1/2: t(n + 2) = t(n) + 1 from some n0 on, over at least three periods.
  std::size_t n0 = 0;
  for (std::size_t n = 0; n + 2 < t.size(); ++n)
    if (t[n + 2] != t[n] + 1) n0 = n + 1;
  if (n0 + 6 > t.size() - 1) return {false, "no period-2 progression with step 1"};
  if (delta.at("exact_rate").at("rate") != "1/2" ||
      std::abs(delta.at("delta").get<double>() - std::sqrt(2.0)) > 1e-12)
    return {false, "reported " + delta.at("exact_rate").dump()};
  if (!s.exited("tensor", "delta") || !all_pass(delta)) return {false, "CLI reported a failure"};
  if (s.time.tensor >= 10.0) return {false, "took " + fmt(s.time.tensor) + " s"};
  return {true, "slope 1/2 from n = " + std::to_string(n0) + ", delta = 2^(1/2); " + fmt(s.time.tensor) + " s"};
}

// 3. Root windows for the random family.
Outcome random_windows(const Suite& s) {
  double worst = 0;
  std::size_t checked = 0;
  for (const auto& m : random_family(s.seed)) {
    const json a = s.drv.artifact(m.name, "alpha");
    if (!a.at("restricted").get<bool>()) return {false, m.name + ": not restricted to lambda"};
    if (a.at("delta").is_null()) return {false, m.name + ": no exact restricted degree"};
    const double dl = a.at("delta").get<double>();
    const json& rows = a.at("rows");
    if (rows.size() != 11) return {false, m.name + ": expected rows n = 0..10"};
    for (const auto& r : rows)
      if (r.at("height").get<std::int64_t>() > r.at("window_bound").get<std::int64_t>())
        return {false, m.name + ": window bound violated at n = " + r.at("n").dump()};
    for (int n = 8; n <= 10; ++n) {
      const double root = std::pow(static_cast<double>(rows.at(n).at("height").get<std::int64_t>()), 1.0 / n);
      worst = std::max(worst, root / dl);
      if (root > 1.25 * dl) return {false, m.name + ": h^(1/n) = " + fmt(root) + " exceeds 1.25 delta_lambda"};
      ++checked;
    }
    if (!s.exited(m.name, "alpha") || !all_pass(a)) return {false, m.name + ": CLI reported a failure"};
  }
  return {true, std::to_string(checked) + " windows, max h^(1/n)/delta_lambda = " + fmt(worst)};
}

// 4. h(A_{n,i}) <= C n p^i for n <= 10.
Outcome truncation_bound(const Suite& s) {
  std::size_t rows_checked = 0, oracle_rows = 0;
  auto check_rows = [&](const std::string& name, const std::function<std::int64_t(int, int)>& oracle) -> std::string {
    const json tb = s.drv.artifact(name, "truncbound");
    const std::int64_t p = tb.at("p"), c = tb.at("constant");
    std::set<int> ns;
    for (const auto& row : csv_rows(s.drv.csv(name, "truncbound"))) {
      const int n = std::stoi(row.at(0)), i = std::stoi(row.at(1));
      const std::int64_t h = std::stoll(row.at(2)), bound = std::stoll(row.at(3));
      std::int64_t pi = 1;
      for (int k = 0; k < i; ++k) pi *= p;
      if (bound != c * n * pi) return "bound column is not C n p^i at n = " + std::to_string(n);
      if (h > bound) return "violation at n = " + std::to_string(n) + ", i = " + std::to_string(i);
      if (oracle) {
        if (h != oracle(n, i)) return "h(A_{" + std::to_string(n) + "," + std::to_string(i) + "}) differs from oracle";
        ++oracle_rows;
      }
      ns.insert(n);
      ++rows_checked;
    }
    if (ns.size() != 10 || *ns.begin() != 1 || *ns.rbegin() != 10) return "rows do not cover n = 1..10";
    if (tb.at("violations") != 0 || !s.exited(name, "truncbound") || !all_pass(tb)) return "CLI reported a failure";
    return "";
  };
  for (const auto& pr : presets()) {
    std::vector<Op> iter{Op{}};
    Op cur = pr.op;
    iter.push_back(cur);
    for (int n = 2; n <= 10; ++n) iter.push_back(cur = compose(pr.op, cur, pr.p));
    const std::string err = check_rows(pr.call, [&](int n, int i) -> std::int64_t {
      return static_cast<std::size_t>(i) < iter[n].size() ? mat_height(iter[n][i]) : 0;
    });
    if (!err.empty()) return {false, pr.call + ": " + err};
  }
  for (const auto& m : random_family(s.seed)) {
    const std::string err = check_rows(m.name, nullptr);
    if (!err.empty()) return {false, m.name + ": " + err};
  }
  return {true, std::to_string(rows_checked) + " coefficients, " + std::to_string(oracle_rows) +
                    " matched against composed presets, 0 violations"};
}

std::int64_t count_polys(std::int64_t p, int k, bool monic) {
  std::int64_t n = 0, pe = 1;
  for (int e = 0; e <= k; ++e, pe *= p) n += pe;  // monic of degree e: p^e
  return monic ? n : (pe - 1);                    // nonzero of degree <= k: p^(k+1) - 1
}

// 5. Product formula.
Outcome product_formula(const Suite& s) {
  const json f2 = s.drv.artifact("field-2", "product-formula");
  const json f3 = s.drv.artifact("field-3", "product-formula");
  for (const json* a : {&f2, &f3})
    if (a->at("count") != 500 || a->at("failures") != 0 || !all_pass(*a)) return {false, "failures reported"};
  const std::int64_t expect = count_polys(2, 3, false) * count_polys(2, 3, true);
  if (f2.at("exhaustive") != expect) return {false, "exhaustive count " + f2.at("exhaustive").dump()};
  if (!s.exited("field-2", "product-formula") || !s.exited("field-3", "product-formula"))
    return {false, "CLI reported a failure"};
  return {true, "500 + 500 random, " + std::to_string(expect) + " exhaustive over F_2, 0 failures"};
}

// 6. Height fast path against places and the oracle here.
Outcome height_paths(const Suite& s) {
  std::size_t n = 0;
  for (const std::string name : {"field-2", "field-3"}) {
    const json a = s.drv.artifact(name, "height");
    const std::int64_t p = a.at("p");
    for (const auto& row : a.at("rows")) {
      const std::int64_t h = row.at("height");
      if (h != row.at("by_places").get<std::int64_t>()) return {false, name + ": paths disagree"};
      if (h != height_oracle(parse_point(row.at("tuple"), p), p))
        return {false, name + ": height of " + row.at("tuple").get<std::string>() + " differs from oracle"};
      ++n;
    }
    if (a.at("mismatches") != 0 || !s.exited(name, "height") || !all_pass(a)) return {false, "CLI reported a failure"};
  }
  const json f2 = s.drv.artifact("field-2", "height");
  const std::int64_t expect = (count_polys(2, 4, false) + 1) * count_polys(2, 4, true);
  if (f2.at("exhaustive") != expect) return {false, "exhaustive count " + f2.at("exhaustive").dump()};
  return {true, std::to_string(n) + " tuples (" + std::to_string(expect) + " exhaustive), exact agreement"};
}

// Sizes of the sets of subset sums of {j q^n : 0 <= n < N, 1 <= j < L}.
std::size_t subset_sums(std::int64_t q, int n_max, int l) {
  std::set<std::int64_t> sums{0};
  std::int64_t qn = 1;
  for (int n = 0; n < n_max; ++n, qn *= q)
    for (int j = 1; j < l; ++j) {
      std::set<std::int64_t> next = sums;
      for (auto v : sums) next.insert(v + j * qn);
      sums = std::move(next);
    }
  return sums.size();
}

// 7. Saturation on diagonal (tau, tau^2) over F_2(T).
Outcome saturation(const Suite& s) {
  const json k = s.drv.artifact("diagonal", "kappa");
  const double target = std::pow(2.0, 1.5);
  std::size_t checked = 0;
  for (const auto& r : k.at("reports")) {
    const int n = r.at("N"), l = r.at("L");
    const std::size_t expect = subset_sums(2, n, l) * subset_sums(4, n, l);
    if (r.at("dim").get<std::size_t>() != expect || r.at("lower_bound").get<bool>())
      return {false, "dim(N=" + std::to_string(n) + ", L=" + std::to_string(l) + ") = " + r.at("dim").dump() +
                         ", oracle " + std::to_string(expect)};
    if (r.at("estimate").get<double>() > 4.0) return {false, "estimate exceeds delta = 4"};
    ++checked;
  }
  if (checked != 9) return {false, "expected N, L in 1..3"};
  const json& b = k.at("reports").back().at("bracket");
  const double lo = b.at("lower"), hi = b.at("upper");
  if (!(lo <= target && target <= hi && hi <= 4.0 && !b.at("upper_is_estimate").get<bool>()))
    return {false, "bracket [" + fmt(lo) + ", " + fmt(hi) + "]"};
  if (!s.exited("diagonal", "kappa") || !all_pass(k)) return {false, "CLI reported a failure"};
  if (s.time.kappa >= 60.0) return {false, "took " + fmt(s.time.kappa) + " s"};
  return {true, "9 dimensions match subset sums, bracket [" + fmt(lo) + ", " + fmt(hi) + "] holds 2^(3/2); " +
                    fmt(s.time.kappa) + " s"};
}

// 8. Siegel solver on 50 systems.
Outcome siegel(const Suite& s) {
  const json a = s.drv.artifact("field-2", "siegel-demo");
  const std::int64_t p = 2;
  const json& systems = a.at("systems");
  if (systems.size() != 50) return {false, "expected 50 systems"};
  for (std::size_t k = 0; k < systems.size(); ++k) {
    const json& sys = systems[k];
    const std::string tag = "system " + std::to_string(k);
    const std::size_t m = sys.at("M"), l = sys.at("L");
    if (m > 3 || l > 8 || sys.at("max_entry_degree").get<int>() > 2) return {false, tag + ": outside the family"};
    if (sys.at("unknowns").get<int>() <= sys.at("equations").get<int>())
      return {false, tag + ": unknown count does not exceed equation count"};
    std::vector<Poly> x;
    bool nonzero = false;
    for (const auto& e : sys.at("solution")) {
      x.push_back(parse_poly(e, p));
      nonzero = nonzero || !x.back().empty();
      if (deg(x.back()) > sys.at("counting_bound").get<std::int64_t>()) return {false, tag + ": degree above B"};
    }
    if (!nonzero || x.size() != l) return {false, tag + ": zero or malformed solution"};
    for (const auto& row : sys.at("system")) {
      Poly acc;
      for (std::size_t j = 0; j < l; ++j) acc = add(acc, mul(parse_poly(row.at(j), p), x[j], p), p);
      if (!acc.empty()) return {false, tag + ": substitution leaves a nonzero residual"};
    }
  }
  if (!s.exited("field-2", "siegel-demo") || !all_pass(a)) return {false, "CLI reported a failure"};
  return {true, "50 nonzero solutions verified by substitution"};
}

std::uint64_t binomial_mod(std::uint64_t n, std::uint64_t k, std::int64_t p) {
  if (k > n) return 0;
  std::vector<std::uint64_t> row{1};
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(i + 1, 1);
    for (std::uint64_t j = 1; j < i; ++j) next[j] = (row[j - 1] + row[j]) % p;
    row = std::move(next);
  }
  return row[k];
}

// 9. Auxiliary polynomial and the order bound at v0 = (T).
Outcome aux_chain(const Suite& s) {
  const json a = s.drv.artifact("aux", "aux-build");
  const std::int64_t p = 2;
  const std::int64_t target = a.at("target_order");
  if (target < 8) return {false, "target order " + std::to_string(target)};
  std::map<std::uint64_t, Poly> g;
  for (const auto& [mono, coeff] : a.at("polynomial").items()) {
    std::uint64_t e = 0;
    if (mono != "1") {
      if (mono.rfind("x1", 0) != 0) return {false, "unexpected monomial " + mono};
      e = mono.size() > 2 ? std::stoull(mono.substr(3)) : 1;
    }
    g[e] = parse_poly(coeff, p);
  }
  if (g.empty()) return {false, "G is zero"};
  if (static_cast<std::int64_t>(g.begin()->first) < target) return {false, "G does not vanish to the target order"};
  const auto q = parse_point(a.at("reduction").at("shifted"), p);
  if (q.size() != 1 || !is_poly(q[0])) return {false, "shifted point is not integral"};
  // Q = F^{s2}(1) - F^{s1}(1) for the Carlitz module, recomputed.
  const Preset pr = carlitz(p);
  std::vector<std::vector<Poly>> orbit{{Poly{1}}};
  const int s1 = a.at("reduction").at("s1"), s2 = a.at("reduction").at("s2");
  while (static_cast<int>(orbit.size()) <= s2) orbit.push_back(evaluate(pr.op, orbit.back(), p));
  if (add(orbit[s2][0], orbit[s1][0], p, -1) != q[0].num) return {false, "Q differs from F^s2 P - F^s1 P"};
  if (valuation_at(q[0].num, Poly{0, 1}, p) < 1) return {false, "Q not in the maximal ideal at (T)"};
  const json& rows = a.at("v0_rows");
  if (rows.size() != 4) return {false, "expected |i| = 0..3"};
  for (std::uint64_t i = 0; i <= 3; ++i) {
    Poly d;
    for (const auto& [k, c] : g)
      if (k >= i && binomial_mod(k, i, p)) d = add(d, mul(c, pow(q[0].num, k - i, p), p), p);
    const std::int64_t v = valuation_at(d, Poly{0, 1}, p);
    const json& row = rows.at(i);
    const json reported = v == INT64_MAX ? json("inf") : json(v);
    if (row.at("valuation") != reported) return {false, "ord of Delta_" + std::to_string(i) + "(G)(Q) differs"};
    if (row.at("required") != target - static_cast<std::int64_t>(i)) return {false, "required order mislabelled"};
    if (v < target - static_cast<std::int64_t>(i)) return {false, "order bound fails at |i| = " + std::to_string(i)};
  }
  if (!s.exited("aux", "aux-build") || !all_pass(a)) return {false, "CLI reported a failure"};
  return {true, "target order " + std::to_string(target) + ", Q = " + a.at("reduction").at("shifted").get<std::string>() +
                    ", bound holds for |i| <= 3"};
}

// 10. Stability for the second-coordinate projection.
Outcome stability(const Suite& s) {
  const std::int64_t p = 3;
  const json pos = s.drv.artifact("stable", "stability");
  const json neg = s.drv.artifact("unstable", "stability");
  if (!pos.at("stable").get<bool>() || neg.at("stable").get<bool>()) return {false, "wrong decisions"};
  // F' = (2,2) entries; pi o F = F' o pi means row 2 of each A_i is (0, F'_i).
  const std::string reduced = pos.at("reduced");
  Op fprime;
  std::stringstream ss(reduced);
  std::string part;
  while (std::getline(ss, part, '+')) {
    part = trimmed(part);
    const auto close = part.find(']');
    if (part.empty() || part[0] != '[' || close == std::string::npos) continue;
    unsigned e = 0;
    const std::string rest = part.substr(close + 1);
    if (rest == "*tau") e = 1;
    else if (rest.rfind("*tau^", 0) == 0) e = static_cast<unsigned>(std::stoul(rest.substr(5)));
    else if (!rest.empty()) return {false, "cannot read " + reduced};
    if (fprime.size() <= e) fprime.resize(e + 1, zero_mat(1, 1));
    fprime[e][0][0] = parse_poly(part.substr(1, close - 1), p);
  }
  const Op f = Suite::stable_op(false);
  const Op pi{Mat{{Poly{}, Poly{1}}}};
  const Op lhs = compose(pi, f, p), rhs = compose(fprime, pi, p);
  if (lhs != rhs) return {false, "pi o F != F' o pi for F' = " + reduced};
  const Op g = Suite::stable_op(true);
  const Op lhs_neg = compose(pi, g, p);
  if (lhs_neg[1][0][0].empty()) return {false, "perturbation does not reach the (2,1) entry"};
  if (!s.exited("stable", "stability") || !s.exited("unstable", "stability") || !all_pass(pos) || !all_pass(neg))
    return {false, "CLI reported a failure"};
  return {true, "triangular case stable with F' = " + reduced + ", perturbed case rejected"};
}

// 11. Pigeonhole reduction at every place of residue degree <= 2.
Outcome reduction(const Suite& s) {
  std::size_t ok = 0, skipped = 0;
  for (const auto& pr : presets()) {
    const json a = s.drv.artifact(pr.call, "reduce");
    const std::int64_t p = pr.p, d = static_cast<std::int64_t>(pr.op[0].size());
    std::vector<std::vector<Poly>> orbit{preset_point(pr)};
    std::set<std::string> seen;
    for (const auto& pl : a.at("places")) {
      const std::string place = pl.at("place");
      seen.insert(place);
      if (pl.at("status") == "not integral") {
        if (place != "inf") return {false, pr.call + ": polynomial point not integral at " + place};
        ++skipped;
        continue;
      }
      if (pl.at("status") != "ok" || !pl.at("verified").get<bool>()) return {false, pr.call + ": " + place + " failed"};
      const bool at_inf = place == "inf";
      const Poly v = at_inf ? Poly{} : parse_poly(place, p);
      const std::int64_t dv = at_inf ? 1 : deg(v);
      std::int64_t bound = 1;
      for (std::int64_t k = 0; k < dv * d; ++k) bound *= p;
      const int s1 = pl.at("s1"), s2 = pl.at("s2");
      if (!(0 <= s1 && s1 < s2 && s2 <= bound + 1)) return {false, pr.call + ": s2 above |k(v)|^d + 1 at " + place};
      while (static_cast<int>(orbit.size()) <= s2) orbit.push_back(evaluate(pr.op, orbit.back(), p));
      const auto q = parse_point(pl.at("shifted"), p);
      if (q.size() != orbit[0].size()) return {false, pr.call + ": wrong dimension at " + place};
      for (std::size_t i = 0; i < q.size(); ++i) {
        const Poly want = add(orbit[s2][i], orbit[s1][i], p, -1);
        if (!is_poly(q[i]) || q[i].num != want) return {false, pr.call + ": Q differs from oracle at " + place};
        const bool in_ideal = want.empty() || (at_inf ? false : valuation_at(want, v, p) >= 1);
        if (!in_ideal) return {false, pr.call + ": Q not in the maximal ideal at " + place};
      }
      ++ok;
    }
    // Places of degree <= 2: all monic irreducibles plus infinity.
    std::size_t expect = 1 + static_cast<std::size_t>(p) + static_cast<std::size_t>((p * p - p) / 2);
    if (seen.size() != expect) return {false, pr.call + ": expected " + std::to_string(expect) + " places"};
    if (!s.exited(pr.call, "reduce") || !all_pass(a)) return {false, pr.call + ": CLI reported a failure"};
  }
  return {true, std::to_string(ok) + " reductions verified on " + std::to_string(presets().size()) + " presets, " +
                    std::to_string(skipped) + " places skipped for integrality"};
}

// 12. Byte-identical rerun.
Outcome identical_trees(const fs::path& a, const fs::path& b) {
  auto listing = [](const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
    std::sort(files.begin(), files.end());
    return files;
  };
  auto bytes = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto fa = listing(a), fb = listing(b);
  if (fa != fb) return {false, "artifact listings differ"};
  for (const auto& f : fa)
    if (bytes(a / f) != bytes(b / f)) return {false, f.string() + " differs"};
  return {true, std::to_string(fa.size()) + " artifacts identical"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the tmlab CLI"};
  std::string cli;
  std::string work;
  std::uint64_t seed = 20240611;
  app.add_option("--cli", cli, "Path to the tmlab executable")->required()->check(CLI::ExistingFile);
  app.add_option("--work", work, "Scratch directory (default: a fresh temporary directory)");
  app.add_option("--seed", seed, "Seed for the random module family")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const fs::path root =
      work.empty() ? fs::temp_directory_path() / ("tmlab-acceptance-" + std::to_string(seed)) : fs::path(work);
  fs::remove_all(root);

  Driver first(fs::absolute(cli).string(), root / "first");
  Suite suite{first, seed, {}, {}};
  suite.run_all();

  using Check = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Check>> checks{
      {"Carlitz orbit over F_3(T)", [&] { return carlitz_orbit(suite); }},
      {"C^(x)2 dynamic degree", [&] { return tensor_rate(suite); }},
      {"restricted height windows", [&] { return random_windows(suite); }},
      {"truncation bound", [&] { return truncation_bound(suite); }},
      {"product formula", [&] { return product_formula(suite); }},
      {"height paths agree", [&] { return height_paths(suite); }},
      {"saturation of (tau, tau^2)", [&] { return saturation(suite); }},
      {"Siegel solver", [&] { return siegel(suite); }},
      {"auxiliary chain at (T)", [&] { return aux_chain(suite); }},
      {"stability", [&] { return stability(suite); }},
      {"pigeonhole reduction", [&] { return reduction(suite); }},
  };

  bool all_ok = true;
  int idx = 0;
  auto report = [&](const std::string& name, const Outcome& o) {
    ++idx;
    all_ok = all_ok && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << idx << "  " << name << ": " << o.detail << std::endl;
  };
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    report(name, o);
  }

  Driver second(fs::absolute(cli).string(), root / "second");
  Suite again{second, seed, {}, {}};
  again.run_all();
  Outcome same;
  try {
    same = identical_trees(root / "first" / "out", root / "second" / "out");
  } catch (const std::exception& e) {
    same = {false, std::string("error: ") + e.what()};
  }
  report("deterministic rerun", same);

  std::cout << (all_ok ? "all criteria pass" : "some criteria fail") << std::endl;
  return all_ok ? 0 : 1;
}
