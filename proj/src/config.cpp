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

#include "menid/config.hpp"

#include <algorithm>

#include "menid/environment.hpp"
#include "menid/errors.hpp"
#include "menid/rule_io.hpp"

namespace menid {
namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

double get_number(const json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return doc.at(key).get<double>();
}

std::size_t get_count(const json& doc, const std::string& key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> get_numbers(const json& doc, const std::string& key,
                                std::vector<double> fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be a number list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("config key '" + key + "' must be a number list");
    out.push_back(x.get<double>());
  }
  return out;
}

std::filesystem::path get_path(const json& doc, const std::string& key,
                               const std::filesystem::path& base, bool required) {
  if (!doc.contains(key)) {
    if (required) throw ConfigError("config is missing '" + key + "'");
    return {};
  }
  if (!doc.at(key).is_string()) throw ConfigError("config key '" + key + "' must be a path");
  std::filesystem::path p = doc.at(key).get<std::string>();
  return p.is_absolute() ? p : base / p;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "description",         "rules",
      "target_env",          "test_env",
      "output_dir",          "T",
      "delta_threshold",     "epsilon",
      "m",                   "total_budget",
      "delta_S",             "solver",
      "horizon",             "discount",
      "seed",                "success_reward",
      "penalty",             "experiment.T",
      "experiment.penalty",  "experiment.replications",
      "experiment.seed_base", "experiment.grid_points",
      "experiment.divergence_K",
  };
  return keys;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  json value = json::parse(raw, nullptr, false);
  doc[key] = value.is_discarded() ? json(raw) : value;
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  RunConfig cfg;
  cfg.rules_path = get_path(doc, "rules", base_dir, true);
  cfg.target_env_path = get_path(doc, "target_env", base_dir, true);
  cfg.test_env_path = get_path(doc, "test_env", base_dir, true);
  if (doc.contains("output_dir")) cfg.output_dir = get_path(doc, "output_dir", base_dir, false);

  LearnerConfig& l = cfg.learner;
  l.test_time = get_number(doc, "T", l.test_time);
  l.delta_threshold = get_number(doc, "delta_threshold", l.delta_threshold);
  l.epsilon = get_number(doc, "epsilon", l.epsilon);
  l.m = get_number(doc, "m", l.m);
  l.total_budget = get_number(doc, "total_budget", l.total_budget);
  l.delta_samples = get_count(doc, "delta_S", l.delta_samples);
  l.solver = parse_solver(get_as<std::string>(doc, "solver", std::string(to_string(l.solver))));
  l.horizon = get_count(doc, "horizon", l.horizon);
  l.discount = get_number(doc, "discount", l.discount);
  l.seed = get_as<std::uint64_t>(doc, "seed", l.seed);
  l.validate();

  cfg.success_reward = get_number(doc, "success_reward", cfg.success_reward);
  cfg.penalty = get_number(doc, "penalty", cfg.penalty);
  if (!(cfg.penalty >= 0.0)) throw ConfigError("penalty must be non-negative");

  cfg.experiment_test_times = get_numbers(doc, "experiment.T", cfg.experiment_test_times);
  cfg.experiment_penalties = get_numbers(doc, "experiment.penalty", cfg.experiment_penalties);
  for (double p : cfg.experiment_penalties) {
    if (!(p >= 0.0)) throw ConfigError("experiment.penalty values must be non-negative");
  }
  for (double t : cfg.experiment_test_times) {
    if (!(t >= 0.0)) throw ConfigError("experiment.T values must be non-negative");
  }
  cfg.replications = get_count(doc, "experiment.replications", cfg.replications);
  if (cfg.replications < 1) throw ConfigError("experiment.replications must be at least 1");
  cfg.seed_base = get_as<std::uint64_t>(doc, "experiment.seed_base", cfg.seed_base);
  cfg.grid_points = get_count(doc, "experiment.grid_points", cfg.grid_points);
  if (cfg.grid_points < 2) throw ConfigError("experiment.grid_points must be at least 2");
  cfg.divergence_repetitions =
      get_count(doc, "experiment.divergence_K", cfg.divergence_repetitions);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides) {
  json doc = read_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_run_config(doc, path.parent_path());
}

Scenario load_scenario(const RunConfig& config) {
  Scenario sc;
  sc.rules = load_rule_set(config.rules_path).rules;
  sc.target = load_environment_spec(config.target_env_path);
  sc.test = load_environment_spec(config.test_env_path);
  sc.validate();
  return sc;
}

ExperimentPlan make_plan(const RunConfig& config, Scenario scenario, std::size_t jobs) {
  ExperimentPlan plan;
  plan.scenario = std::move(scenario);
  plan.learner = config.learner;
  plan.success_reward = config.success_reward;
  plan.test_times = config.experiment_test_times;
  plan.penalties = config.experiment_penalties;
  plan.replications = config.replications;
  plan.seed_base = config.seed_base;
  plan.grid_points = config.grid_points;
  plan.jobs = jobs;
  plan.validate();
  return plan;
}

}  // namespace menid
