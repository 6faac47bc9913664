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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tmlab/harness.hpp"

int main(int argc, char** argv) {
  namespace h = tmlab::harness;
  CLI::App app{"tmlab: experiments on additive polynomial dynamics over F_q(T)"};
  std::string command, config, out = "out";
  std::optional<std::uint64_t> seed;
  app.add_option("subcommand", command, "Experiment to run")->required()->check(CLI::IsMember(h::subcommands()));
  app.add_option("--config", config, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Directory for CSV, JSON and verdict files")->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized experiments (overrides the config)");
  CLI11_PARSE(app, argc, argv);

  try {
    const h::ExperimentConfig cfg = h::load_config(config, command, seed);
    const auto verdicts = h::run(command, cfg, out);
    for (const auto& v : verdicts)
      std::cout << h::status_name(v.status) << "  " << v.anchor << ": " << v.detail << '\n';
    return h::any_failed(verdicts) ? 1 : 0;
  } catch (const h::ConfigError& e) {
    std::cerr << "tmlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tmlab: " << command << " failed: " << e.what() << '\n';
    return 3;
  }
}
