// Copyright 2026 The MENID Authors
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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "menid/experiment.hpp"
#include "menid/learner.hpp"

namespace menid {

// Everything a `learn` or `experiment` invocation needs. Loaded from a flat
// JSON object whose keys may contain dots ("experiment.replications");
// relative paths resolve against the config file's directory.
struct RunConfig {
  std::filesystem::path rules_path;
  std::filesystem::path target_env_path;
  std::filesystem::path test_env_path;
  std::filesystem::path output_dir = "out";

  LearnerConfig learner;
  double success_reward = 1.0;
  double penalty = 0.0;

  std::vector<double> experiment_test_times{0.0, 20.0};
  std::vector<double> experiment_penalties{0.0, 5.0, 10.0};
  std::size_t replications = 5;
  std::uint64_t seed_base = 0;
  std::size_t grid_points = 60;
  std::size_t divergence_repetitions = 100;
};

// Keys recognised in a config document.
const std::vector<std::string>& config_keys();

// "key=value": value is parsed as JSON when possible, else taken as a
// string. Throws ConfigError for a malformed override or unknown key.
void apply_override(nlohmann::json& doc, std::string_view assignment);

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

// Reads the file, applies overrides in order, and parses.
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides);

// Loads and cross-validates the rule set and both environment files.
Scenario load_scenario(const RunConfig& config);

ExperimentPlan make_plan(const RunConfig& config, Scenario scenario, std::size_t jobs);

}  // namespace menid
