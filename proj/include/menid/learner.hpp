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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "menid/environment.hpp"
#include "menid/planning.hpp"
#include "menid/random.hpp"
#include "menid/rule.hpp"

namespace menid {

enum class Solver { thompson, value_iteration };

std::string_view to_string(Solver solver);
Solver parse_solver(std::string_view text);

struct LearnerConfig {
  double test_time = 0.0;           // T, seconds of testing per test phase; 0 disables testing
  double delta_threshold = 0.01;    // test when delta exceeds this
  double epsilon = 0.1;
  double m = 10.0;
  double total_budget = 3600.0;     // simulated seconds
  std::size_t delta_samples = 10'000;
  Solver solver = Solver::thompson;
  std::size_t horizon = 5;          // value iteration only
  double discount = 1.0;            // value iteration only
  std::uint64_t seed = 0;

  // Throws InvalidParameter.
  void validate() const;
};

// Actions tested since their last target execution.
class MarkSet {
 public:
  void mark(const GroundedAction& a) { marked_.insert(a); }
  void unmark(const GroundedAction& a) { marked_.erase(a); }
  bool is_marked(const GroundedAction& a) const { return marked_.count(a) != 0; }
  std::size_t size() const { return marked_.size(); }

 private:
  std::set<GroundedAction> marked_;
};

struct LogEntry {
  Experience experience;
  double sim_time = 0.0;  // learner clock when the execution finished
  std::string rule_id;
  std::size_t outcome_index = 0;
  double reward = 0.0;  // always 0 for test executions
  double cum_reward = 0.0;
};

struct ExperienceLog {
  std::vector<LogEntry> entries;
  // (sim_time, accumulated score); starts at (0, 0) and gains a point per
  // target execution and per failed episode.
  std::vector<std::pair<double, double>> reward_trace{{0.0, 0.0}};
  // Simulated seconds charged by each test phase.
  std::vector<double> test_phases;
  std::size_t failed_episodes = 0;

  double score() const { return reward_trace.back().second; }
  std::size_t count(EnvKind kind) const;

  // Columns sim_time,env_label,action,rule_id,outcome_index,reward,cum_reward.
  std::string to_csv() const;
};

// The interleaved learning/execution loop. Owns a copy of the rules and
// updates their counts from every experience it logs.
class Learner {
 public:
  Learner(LearnerConfig config, std::vector<MenidRule> rules, RewardSpec reward);

  // Unmarked and the delta bound on the rule's test counts exceeds the
  // threshold. Empty test counts use the uniform prior Dir(1, ..., 1)
  // measured against the uniform distribution.
  bool should_test(const MenidRule& rule, const GroundedAction& action);

  // Repeats `action` in the test environment, mirrored to `state` before
  // every execution, until at least T seconds have been charged; marks the
  // action when it ran at least once. Returns false when the time budget
  // cut the phase short.
  bool test_phase(Environment& test_env, const State& state, const GroundedAction& action);

  // Unmarks and executes `action` in the target environment, accruing
  // reward. Returns false (executing nothing) when the execution would
  // overrun the budget.
  bool execute_phase(Environment& target_env, const GroundedAction& action);

  // Classifies each experience with its triggering rule and increments that
  // rule's counts; refreshes the fused target and empirical test estimates.
  void update_rules(std::span<const Experience> fresh);

  // Runs until the next execution would overrun the time budget.
  ExperienceLog run(Environment& target_env, Environment& test_env);

  const std::vector<MenidRule>& rules() const { return rules_; }
  const MarkSet& marks() const { return marks_; }
  const ExperienceLog& log() const { return log_; }
  double now() const { return clock_.now(); }

 private:
  bool fits(double latency) const;
  GroundedAction choose(const State& state, std::span<const GroundedAction> actions);
  void append(const Experience& exp);

  LearnerConfig config_;
  std::vector<MenidRule> rules_;
  RewardSpec reward_;
  MarkSet marks_;
  ExperienceLog log_;
  SimClock clock_;
  Rng delta_rng_;
  Rng solver_rng_;
  Rng target_rng_;
  Rng test_rng_;
};

// Convenience wrapper: a fresh Learner run.
ExperienceLog run_learner(const LearnerConfig& config, Environment& target_env,
                          Environment& test_env, std::vector<MenidRule> rules,
                          const RewardSpec& reward);

}  // namespace menid
