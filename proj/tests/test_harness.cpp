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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tmlab/harness.hpp"
#include "tmlab/mpoly.hpp"
#include "tmlab/parse.hpp"

using namespace tmlab;
using namespace tmlab::harness;
using tmlab::testing::op_from;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tmlab_harness_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

const VerdictRecord* find(const std::vector<VerdictRecord>& vs, const std::string& anchor) {
  for (const auto& v : vs)
    if (v.anchor == anchor) return &v;
  return nullptr;
}

}  // namespace

TEST_CASE("presets") {
  auto f3 = FqCtx::prime(3);
  CHECK(make_preset("carlitz(3)") == op_from(f3, 1, 1, {{{"T"}}, {{"1"}}}));
  auto f2 = FqCtx::prime(2);
  CHECK(make_preset("carlitz-tensor(2,2)") == op_from(f2, 2, 2, {{{"T", "1"}, {"0", "T"}}, {{"0", "0"}, {"1", "0"}}}));
  CHECK(make_preset("carlitz-tensor(2, 1)") == make_preset("carlitz(2)"));
  CHECK(make_preset("diagonal(2,4)") ==
        op_from(f2, 2, 2, {{{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "0"}}, {{"0", "0"}, {"0", "1"}}}));
  CHECK(make_preset("diagonal(3,9)").ctx()->p() == 3);
  CHECK(make_preset("random(3,2,1,5)") == make_preset("random(3,2,1,5)"));
  CHECK_FALSE(make_preset("random(3,2,1,5)") == make_preset("random(3,2,1,6)"));
  CHECK(make_preset("random(2,3,2,1)").tau_degree() == 2);
  auto f4 = FqCtx::make(2, {1, 1, 1});
  CHECK(make_preset("carlitz(2)", f4).ctx()->q() == 4);

  CHECK_THROWS_AS(make_preset("carlitz(4)"), ConfigError);
  CHECK_THROWS_AS(make_preset("diagonal(2,3)"), ConfigError);
  CHECK_THROWS_AS(make_preset("carlitz"), ConfigError);
  CHECK_THROWS_AS(make_preset("carlitz(2,2)"), ConfigError);
  CHECK_THROWS_AS(make_preset("mystery(2)"), ConfigError);
  CHECK_THROWS_AS(make_preset("carlitz(3)", f4), ConfigError);
}

TEST_CASE("operator literals") {
  auto f2 = FqCtx::prime(2);
  auto flat = parse_operator_literal(nlohmann::json::parse(R"j({"d": 1, "A": [["T"], ["1"]]})j"), f2);
  CHECK(flat == make_preset("carlitz(2)"));
  auto nested = parse_operator_literal(
      nlohmann::json::parse(R"j({"d": 2, "A": [[["T", "1"], ["0", "T"]], [["0", "0"], ["1", "0"]]]})j"), f2);
  auto flat2 = parse_operator_literal(nlohmann::json::parse(R"j({"A": [["T", "1", "0", "T"], ["0", "0", 1, 0]]})j"), f2, 2);
  CHECK(nested == make_preset("carlitz-tensor(2,2)"));
  CHECK(flat2 == nested);
  auto row = parse_operator_literal(nlohmann::json::parse(R"j({"A": [["1", "T"]]})j"), f2, 2);
  CHECK(row.out_dim() == 1);

  CHECK_THROWS_AS(parse_operator_literal(nlohmann::json::parse(R"j({"A": [["1", "T", "1"]]})j"), f2, 2), ConfigError);
  CHECK_THROWS_AS(parse_operator_literal(nlohmann::json::parse(R"j({"A": [["T^"]]})j"), f2, 1), ConfigError);
  CHECK_THROWS_AS(parse_operator_literal(nlohmann::json::parse(R"j({"d": 2, "A": [["1", "T"]]})j"), f2, 1),
                  ConfigError);
  CHECK_THROWS_AS(parse_operator_literal(nlohmann::json::parse(R"j({"B": []})j"), f2, 1), ConfigError);
}

TEST_CASE("config parsing") {
  auto cfg = parse_config(R"j({"module": "carlitz(3)", "params": {"n_max": 4}, "delta": {"n_max": 6}})j", "delta");
  CHECK(cfg.id == "carlitz(3)");
  CHECK(cfg.params.at("n_max") == 6);
  CHECK(cfg.point->coords.size() == 1);
  CHECK(cfg.point->coords[0].is_one());
  CHECK_FALSE(cfg.lambda_given);
  auto other = parse_config(R"j({"module": "carlitz(3)", "params": {"n_max": 4}, "delta": {"n_max": 6}})j", "orbit");
  CHECK(other.params.at("n_max") == 4);

  auto seeded = parse_config(R"j({"module": "carlitz(2)", "seed": 5, "point": "random"})j", "orbit");
  auto again = parse_config(R"j({"module": "carlitz(2)", "seed": 5, "point": "random"})j", "orbit");
  auto moved = parse_config(R"j({"module": "carlitz(2)", "seed": 5, "point": "random"})j", "orbit", 6);
  CHECK(seeded.point == again.point);
  CHECK(moved.seed == 6);

  auto lit = parse_config(R"j({"field": {"p": 2, "modulus": [1, 1, 1]},
                              "module": {"d": 1, "A": [["T"], ["(1,1)"]]},
                              "lambda": {"A": [["T"]]}})j",
                          "delta-lambda");
  CHECK(lit.ctx->q() == 4);
  CHECK(lit.lambda_given);

  CHECK_THROWS_AS(parse_config(R"j({"module": "carlitz(2)"})j", "fly"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"j({"module": {"d": 1, "A": [["T"]]}})j", "delta"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"j({"module": "carlitz(2)", "point": ["1", "T"]})j", "delta"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"j({"params": {}})j", "delta"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"j({"field": {"p": 4}})j", "product-formula"), ConfigError);

  // JSON syntax errors carry a line and column.
  try {
    parse_config("{\n  \"module\": \"carlitz(2)\",\n  \"point\": [1,,]\n}", "orbit");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  // Entry parse errors name the offending entry.
  try {
    parse_config(R"j({"module": "carlitz(2)", "point": ["T + + "]})j", "orbit");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("point[0]") != std::string::npos);
  }
}

TEST_CASE("delta on the Carlitz module reports an exact rate") {
  auto cfg = parse_config(R"j({"module": "carlitz(3)", "delta": {"n_max": 6, "expect_rate": "1"}})j", "delta");
  RunResult r = execute("delta", cfg);
  CHECK(r.json.at("exact_rate").at("rate") == "1");
  CHECK(r.json.at("delta") == doctest::Approx(3.0));
  CHECK_FALSE(any_failed(r.verdicts));
  const auto* v = find(r.verdicts, "dynamic degree matches the expected exponent");
  REQUIRE(v);
  CHECK(v->status == Status::pass);

  auto wrong = parse_config(R"j({"module": "carlitz(3)", "delta": {"n_max": 6, "expect_rate": "1/2"}})j", "delta");
  CHECK(any_failed(execute("delta", wrong).verdicts));
}

TEST_CASE("alpha on a preperiodic point reports bounded heights") {
  auto cfg = parse_config(R"j({"module": "diagonal(2,4)", "point": ["1", "1"], "alpha": {"n_max": 6}})j", "alpha");
  RunResult r = execute("alpha", cfg);
  const auto* v = find(r.verdicts, "orbit height growth");
  REQUIRE(v);
  CHECK(v->detail == "bounded heights");
  CHECK_FALSE(any_failed(r.verdicts));
  auto pre = execute("preperiodic", parse_config(R"j({"module": "diagonal(2,4)", "point": ["1", "1"]})j", "preperiodic"));
  CHECK(pre.json.at("kind") == "preperiodic");
}

TEST_CASE("orbit heights and the q in the CSV header") {
  auto cfg = parse_config(R"j({"module": "carlitz(3)", "orbit": {"n": 3}})j", "orbit");
  RunResult r = execute("orbit", cfg);
  CHECK(r.csv.rfind("n,height(q=3),point\n", 0) == 0);
  std::vector<std::int64_t> hs;
  for (const auto& row : r.json.at("rows")) hs.push_back(row.at("height").get<std::int64_t>());
  CHECK(hs == std::vector<std::int64_t>{0, 1, 3, 9});
  auto h = execute("height", parse_config(R"j({"field": {"p": 5}, "height": {"tuples": [["T", "1/T"]]}})j", "height"));
  CHECK(h.csv.find("height(q=5)") != std::string::npos);
  CHECK(h.json.at("rows")[0].at("height") == 2);
}

TEST_CASE("product formula on seeded random elements") {
  auto cfg = parse_config(R"j({"field": {"p": 3}, "seed": 9, "product-formula": {"count": 100}})j", "product-formula");
  RunResult r = execute("product-formula", cfg);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].status == Status::pass);
  CHECK(r.json.at("failures") == 0);
}

TEST_CASE("kappa report layout") {
  auto cfg = parse_config(R"j({"module": "diagonal(2,4)", "kappa": {"N_max": 2, "L": 2}})j", "kappa");
  RunResult r = execute("kappa", cfg);
  const auto& reports = r.json.at("reports");
  REQUIRE(reports.size() == 2);
  for (const char* key : {"N", "L", "degree_cap", "dim", "estimate", "bracket"}) CHECK(reports[0].contains(key));
  CHECK(reports[1].at("dim") == 16);  // {0,1,2,3} x {0,1,4,5} exponent pairs
  CHECK_FALSE(any_failed(r.verdicts));
  CHECK_THROWS_AS(execute("kappa", parse_config(R"j({"module": "diagonal(2,4)", "kappa": {"N_max": 1}})j", "kappa")),
                  ConfigError);
}

TEST_CASE("aux-build output replays") {
  auto cfg = parse_config(R"j({"module": "carlitz(2)", "aux-build": {"N": 2, "delta_lambda": "1",
      "param_set": {"delta1": "19/10", "delta2": "17/10", "delta3": "8/5", "delta4": "3/2", "delta_plus": "5/2"},
      "place": "T"}})j",
                          "aux-build");
  RunResult r = execute("aux-build", cfg);
  CHECK_FALSE(any_failed(r.verdicts));
  auto ctx = FqCtx::prime(2);
  MPoly g(ctx, 1);
  for (const auto& [mono, coeff] : r.json.at("polynomial").items()) {
    Monomial m{0};
    if (mono != "1") {
      const auto caret = mono.find('^');
      m[0] = caret == std::string::npos ? 1 : static_cast<std::uint32_t>(std::stoul(mono.substr(caret + 1)));
    }
    g.add_term(m, parse_ratfunc(ctx, coeff.get<std::string>()));
  }
  CHECK_FALSE(g.is_zero());
  CHECK(g.lowest_degree() >= r.json.at("target_order").get<std::uint64_t>());

  auto bad = parse_config(R"j({"module": "carlitz(2)", "aux-build": {"delta_lambda": "1",
      "param_set": {"delta1": "21/10", "delta2": "17/10", "delta3": "8/5", "delta4": "3/2", "delta_plus": "5/2"}}})j",
                          "aux-build");
  CHECK(any_failed(execute("aux-build", bad).verdicts));
  auto tight = parse_config(R"j({"module": "carlitz(2)", "aux-build": {"N": 3, "delta_lambda": "1", "max_unknowns": 3}})j",
                            "aux-build");
  auto tr = execute("aux-build", tight);
  CHECK_FALSE(any_failed(tr.verdicts));
  CHECK(find(tr.verdicts, "auxiliary polynomial")->detail.rfind("infeasible", 0) == 0);
}

TEST_CASE("siegel demo solves every underdetermined system") {
  auto cfg = parse_config(R"j({"field": {"p": 2}, "seed": 3, "siegel-demo": {"count": 8}})j", "siegel-demo");
  RunResult r = execute("siegel-demo", cfg);
  CHECK_FALSE(any_failed(r.verdicts));
  for (const auto& s : r.json.at("systems")) {
    CHECK(s.at("verified") == true);
    CHECK(s.at("unknowns").get<std::size_t>() > s.at("equations").get<std::size_t>());
  }
  auto given = parse_config(R"j({"field": {"p": 2}, "siegel-demo": {"systems": [[["1", "T"]]]}})j", "siegel-demo");
  auto g = execute("siegel-demo", given);
  CHECK(g.json.at("systems")[0].at("smallest_bound") == 1);
}

TEST_CASE("stability command") {
  auto cfg = parse_config(R"j({"field": {"p": 3},
      "module": {"d": 2, "A": [[["T", "1"], ["0", "T^2"]], [["1", "T"], ["0", "1"]]]},
      "stability": {"pi": {"A": [["0", "1"]]}, "expect": "stable"}})j",
                          "stability");
  RunResult r = execute("stability", cfg);
  CHECK_FALSE(any_failed(r.verdicts));
  CHECK(r.json.at("stable") == true);
  auto neg = parse_config(R"j({"field": {"p": 3},
      "module": {"d": 2, "A": [[["T", "1"], ["1", "T^2"]], [["1", "T"], ["0", "1"]]]},
      "stability": {"pi": {"A": [["0", "1"]]}, "expect": "not_stable"}})j",
                          "stability");
  RunResult n = execute("stability", neg);
  CHECK_FALSE(any_failed(n.verdicts));
  CHECK(n.json.at("stable") == false);
}

TEST_CASE("reduce command") {
  auto cfg = parse_config(R"j({"module": "carlitz-tensor(2,2)", "point": ["1", "T"], "reduce": {"max_residue_degree": 2}})j",
                          "reduce");
  RunResult r = execute("reduce", cfg);
  CHECK_FALSE(any_failed(r.verdicts));
  CHECK(r.json.at("places").size() == 4);  // T, T+1, T^2+T+1, infinity
}

TEST_CASE("artifacts are written deterministically and verdicts merge") {
  const std::string text = R"j({"module": "carlitz(2)", "seed": 4, "point": "random", "orbit": {"n": 4},
                              "product-formula": {"count": 20}})j";
  auto a = scratch("a"), b = scratch("b");
  for (const auto& dir : {a, b}) {
    run("orbit", parse_config(text, "orbit"), dir);
    run("product-formula", parse_config(text, "product-formula"), dir);
  }
  for (const char* name : {"orbit.csv", "orbit.json", "product-formula.csv", "product-formula.json", "verdicts.json"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  auto verdicts = nlohmann::json::parse(slurp(a / "verdicts.json")).at("verdicts");
  std::set<std::string> commands;
  for (const auto& v : verdicts) commands.insert(v.at("command").get<std::string>());
  CHECK(commands == std::set<std::string>{"orbit", "product-formula"});
  // Re-running a command replaces its records instead of appending.
  run("orbit", parse_config(text, "orbit"), a);
  CHECK(nlohmann::json::parse(slurp(a / "verdicts.json")).at("verdicts").size() == verdicts.size());
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("every subcommand runs on a small config") {
  const std::string text = R"j({"module": "carlitz-tensor(2,2)", "point": ["1", "T"],
      "params": {"n_max": 4, "N": 1, "N_max": 2, "count": 5, "S": 1},
      "stability": {"pi": {"A": [["1", "0"]]}},
      "height": {"max_degree": 2}})j";
  for (const auto& cmd : subcommands()) {
    CAPTURE(cmd);
    RunResult r = execute(cmd, parse_config(text, cmd));
    CHECK_FALSE(r.verdicts.empty());
    CHECK_FALSE(r.json.is_null());
    CHECK_FALSE(any_failed(r.verdicts));
  }
}
