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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "menid/categorical.hpp"
#include "menid/random.hpp"
#include "menid/rule.hpp"
#include "menid/symbols.hpp"

namespace menid {

// What a simulated environment does to the state when it samples the noise
// outcome.
enum class NoiseEffect {
  none,      // state unchanged
  scramble,  // one uniformly chosen predicate is deleted
};

struct Perturbation {
  double magnitude = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;
};

struct EnvironmentSpec {
  std::string env_id;
  EnvKind kind = EnvKind::target;
  std::map<std::string, ProbVector> ground_truth;  // rule_id -> outcome distribution
  std::map<std::string, double> latency;           // action name -> seconds
  State initial_state;
  std::optional<Perturbation> perturbation;
  State goal;
  NoiseEffect noise_effect = NoiseEffect::none;
  std::size_t max_steps = 20;
};

// Environment file:
//   {"env_id", "kind": "target"|"test", "initial_state": [...],
//    "latency": {action: seconds}, "ground_truth": {rule_id: [probs]},
//    "perturbation": {"magnitude", "seed"} | null, "goal": [...],
//    "noise_effect": "none"|"scramble", "max_steps": 20}
// The last two members are optional.
EnvironmentSpec parse_environment_spec(const nlohmann::json& doc);
EnvironmentSpec load_environment_spec(const std::filesystem::path& path);
nlohmann::json to_json(const EnvironmentSpec& spec);

// Throws ConfigError unless the spec covers every rule with a distribution of
// the right length, every action with a positive latency, and uses the rule
// set's predicate arities.
void check_environment_spec(const EnvironmentSpec& spec, std::span<const MenidRule> rules);

// normalize((1 - magnitude) * p + magnitude * u) with u ~ Dir(1, ..., 1).
ProbVector perturb_distribution(const ProbVector& p, double magnitude, Rng& rng);

struct Experience {
  EnvKind env_label = EnvKind::target;
  State s;
  GroundedAction action;
  State s_next;
  double elapsed = 0.0;
};

// Simulated time. Only moves forward.
class SimClock {
 public:
  double now() const { return now_; }
  void advance(double seconds);

 private:
  double now_ = 0.0;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvKind kind() const = 0;
  virtual State current_state() const = 0;
  // Executes `action` from the current state. Throws NoRuleTriggers when the
  // action is inapplicable there.
  virtual Experience execute(const GroundedAction& action, Rng& rng) = 0;
  // Back to the initial state. The clock keeps running.
  virtual void reset() = 0;
  // Overwrites the current state; used to mirror the target state into the
  // test environment before testing.
  virtual void set_state(const State& state) = 0;
  // Expected duration of one execution of `action`.
  virtual double latency(const GroundedAction& action) const = 0;
  virtual double now() const = 0;

  virtual bool is_goal(const State& state) const = 0;
  virtual std::size_t max_steps() const = 0;
};

// Samples outcomes of the rule set from fixed ground-truth distributions.
class SimulatedEnvironment final : public Environment {
 public:
  // Copies the rules' structure. Applies the spec's perturbation once, here.
  SimulatedEnvironment(EnvironmentSpec spec, std::span<const MenidRule> rules);

  EnvKind kind() const override { return spec_.kind; }
  State current_state() const override { return state_; }
  Experience execute(const GroundedAction& action, Rng& rng) override;
  void reset() override { state_ = spec_.initial_state; }
  void set_state(const State& state) override { state_ = state; }
  double latency(const GroundedAction& action) const override;
  double now() const override { return clock_.now(); }
  bool is_goal(const State& state) const override;
  std::size_t max_steps() const override { return spec_.max_steps; }

  const EnvironmentSpec& spec() const { return spec_; }
  // Distribution actually sampled (after perturbation).
  const ProbVector& distribution(const std::string& rule_id) const;
  // Outcome index sampled by the most recent execution.
  std::size_t last_outcome() const { return last_outcome_; }

 private:
  EnvironmentSpec spec_;
  std::vector<MenidRule> rules_;
  std::map<std::string, ProbVector> effective_;
  State state_;
  SimClock clock_;
  std::size_t last_outcome_ = 0;
};

// Adapter for an external process (simulator or robot bridge). Time is
// measured with the wall clock; latency() reports the running mean duration
// observed per action name.
class WallClockEnvironment final : public Environment {
 public:
  struct Hooks {
    std::function<State()> get_state;
    std::function<State(const GroundedAction&)> execute;
    std::function<void()> reset;
    std::function<void(const State&)> set_state;
  };

  WallClockEnvironment(EnvKind kind, Hooks hooks, State goal, std::size_t max_steps = 20);

  EnvKind kind() const override { return kind_; }
  State current_state() const override { return hooks_.get_state(); }
  Experience execute(const GroundedAction& action, Rng& rng) override;
  void reset() override { hooks_.reset(); }
  void set_state(const State& state) override { hooks_.set_state(state); }
  double latency(const GroundedAction& action) const override;
  double now() const override { return clock_.now(); }
  bool is_goal(const State& state) const override;
  std::size_t max_steps() const override { return max_steps_; }

 private:
  EnvKind kind_;
  Hooks hooks_;
  State goal_;
  std::size_t max_steps_;
  SimClock clock_;
  std::map<std::string, std::pair<double, std::size_t>> durations_;
};

}  // namespace menid
