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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "menid/categorical.hpp"
#include "menid/environment.hpp"
#include "menid/learner.hpp"
#include "menid/random.hpp"
#include "menid/rule.hpp"

namespace menid {

// 1 - |a n b| / |a u b|; 0 when both states are empty.
double jaccard_error(const State& a, const State& b);

// A rule set with one target and one test environment over it.
struct Scenario {
  std::vector<MenidRule> rules;
  EnvironmentSpec target;
  EnvironmentSpec test;

  // Throws ConfigError unless both specs fit the rules and have the right kinds.
  void validate() const;
};

// Three PCB-removal actions whose target success probabilities are 0.9, 0.5
// and 0.1 (failures leave the state unchanged, success removes the PCB and
// ends the episode). The test environment perturbs these distributions with
// magnitude `perturbation`. Target executions take 20 s, tests 1 s.
Scenario reference_scenario(double perturbation = 0.15, std::uint64_t perturbation_seed = 2020);

struct ConfigPoint {
  double test_time = 0.0;
  double penalty = 0.0;

  // e.g. "T20_penalty10"
  std::string name() const;
};

struct ExperimentPlan {
  Scenario scenario;
  LearnerConfig learner;  // seed is replaced per replication
  double success_reward = 1.0;
  std::vector<double> test_times{0.0, 20.0};
  std::vector<double> penalties{0.0, 5.0, 10.0};
  std::size_t replications = 5;
  std::uint64_t seed_base = 0;  // replication r runs with seed_base + r in every config
  std::size_t grid_points = 60;
  std::size_t jobs = 1;

  std::vector<ConfigPoint> grid() const;
  void validate() const;
};

struct RewardCurve {
  std::vector<double> time;
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation across replications

  // Columns time,mean,std.
  std::string to_csv() const;
};

struct ReplicationResult {
  ConfigPoint config;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::optional<ExperienceLog> log;  // empty when the run failed
  std::string error;
};

struct ExperimentResult {
  std::vector<ConfigPoint> configs;
  std::vector<RewardCurve> curves;  // parallel to configs, over successful runs
  std::vector<ReplicationResult> runs;  // config-major, replication-minor

  std::vector<std::string> failures() const;
  const ReplicationResult& run(std::size_t config, std::size_t replication) const;
};

// k * budget / (points - 1) for k = 0 .. points - 1.
std::vector<double> time_grid(double budget, std::size_t points);

// Score of a step-function trace at time t (last point with time <= t).
double trace_value_at(std::span<const std::pair<double, double>> trace, double t);

RewardCurve aggregate_traces(const std::vector<std::vector<std::pair<double, double>>>& traces,
                             const std::vector<double>& grid);

// Every (config, replication) pair of the plan, then per-config curves. A
// failing replication is recorded and excluded from its curve.
ExperimentResult run_replications(const ExperimentPlan& plan);

struct CalibrationRow {
  std::size_t n = 0;
  double actual_error = 0.0;            // mean over streams of max_i |p_i - q_i|
  std::vector<double> mean_delta;       // per epsilon
  std::vector<double> exceedance_rate;  // per epsilon: fraction of streams with error > delta
};

struct CalibrationTable {
  std::vector<double> epsilons;
  std::vector<CalibrationRow> rows;

  // Columns N,actual_error,delta_eps_<e>...,exceed_eps_<e>...
  std::string to_csv() const;
};

// For N = 1 .. max_n, `replications` independent observation streams from
// `true_dist` are extended one draw at a time and the delta bound of each
// prefix is compared with its actual error.
CalibrationTable delta_calibration(const ProbVector& true_dist, std::size_t max_n,
                                   const std::vector<double>& epsilons, std::size_t sample_size,
                                   std::size_t replications, std::uint64_t seed);

// Exceedance rates at a single sample size N.
std::vector<double> delta_exceedance(const ProbVector& true_dist, std::size_t n,
                                     const std::vector<double>& epsilons,
                                     std::size_t sample_size, std::size_t replications,
                                     std::uint64_t seed);

struct DivergenceRow {
  GroundedAction action;
  std::size_t repetitions = 0;
  double mean_error = 0.0;
};

// Executes each action K times from each environment's initial state and
// averages the Jaccard error between the paired results.
std::vector<DivergenceRow> symbolic_divergence_report(Environment& env_a, Rng& rng_a,
                                                      Environment& env_b, Rng& rng_b,
                                                      std::span<const GroundedAction> actions,
                                                      std::size_t repetitions);

// Columns action,repetitions,mean_error.
std::string divergence_csv(const std::vector<DivergenceRow>& rows);

}  // namespace menid
