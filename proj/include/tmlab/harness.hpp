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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tmlab/operator.hpp"

namespace tmlab::harness {

/// Malformed or inconsistent experiment configuration. JSON syntax errors
/// carry the line and column of the offending character.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One experiment: the field, the module F, a point P, an observable lambda
/// (a one-row operator) and the command-specific parameters.
struct ExperimentConfig {
  std::string id;
  std::string module_label;     // preset call or "literal"
  FqCtxPtr ctx;
  std::optional<TwistedOperator> f;  // absent for field-only commands
  std::optional<PointK> point;
  std::optional<TwistedOperator> lambda;
  bool lambda_given = false;    // set explicitly rather than defaulted
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

/// Every subcommand understood by run(), in a fixed order.
const std::vector<std::string>& subcommands();

/// Parses a JSON config for `command`. Parameters are the "params" object
/// overlaid with the object stored under the command's own name. A seed on
/// the command line replaces the configured one.
ExperimentConfig parse_config(std::string_view text, const std::string& command,
                              std::optional<std::uint64_t> seed = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& command,
                             std::optional<std::uint64_t> seed = std::nullopt);

/// Named presets: carlitz(p), carlitz-tensor(p,d), diagonal(q1,...,qd) and
/// random(p,d,r,seed). `field` overrides the prime field implied by p.
TwistedOperator make_preset(std::string_view call, const FqCtxPtr& field = nullptr);

/// {"d": d, "A": [A_0, A_1, ...]} where each A_i is either a flat row-major
/// list of entry strings or a list of rows. The input width defaults to d
/// and the row count is inferred.
TwistedOperator parse_operator_literal(const nlohmann::json& literal, const FqCtxPtr& ctx, std::size_t width = 0);

enum class Status { pass, fail, data };
const char* status_name(Status s);

struct VerdictRecord {
  std::string experiment;
  std::string command;
  std::string anchor;  // the statement under test
  Status status = Status::data;
  std::string detail;
  std::vector<std::string> artifacts;
};

nlohmann::json to_json(const VerdictRecord& v);

/// The artifacts and verdicts of one command, before anything is written.
struct RunResult {
  std::vector<VerdictRecord> verdicts;
  std::string csv;
  nlohmann::json json;
};

/// Runs `command` on `config` with no file output. Deterministic given the
/// config and seed. Throws ConfigError on unknown commands or bad parameters.
RunResult execute(const std::string& command, const ExperimentConfig& config);

/// execute() followed by writing <out>/<command>.csv, <out>/<command>.json
/// and merging the verdicts into <out>/verdicts.json, where records of other
/// commands are kept.
std::vector<VerdictRecord> run(const std::string& command, const ExperimentConfig& config,
                               const std::filesystem::path& out_dir);

bool any_failed(const std::vector<VerdictRecord>& verdicts);

}  // namespace tmlab::harness
