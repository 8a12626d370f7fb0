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

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "menid/categorical.hpp"
#include "menid/random.hpp"
#include "menid/rule.hpp"
#include "menid/symbols.hpp"

namespace menid {

enum class OutcomeClass { success, failure, neutral };

// Reward of an explicit outcome follows its "reward" tag when the rule file
// gives one, otherwise its label: "success" and "failure"/"fail" map to their
// classes, everything else is neutral.
OutcomeClass outcome_class(const Outcome& outcome);

struct RewardSpec {
  double success_reward = 1.0;
  double failure_penalty = 0.0;  // subtracted on failure, >= 0
  // rule_id -> class per outcome index; index 0 (noise) is a failure.
  std::map<std::string, std::vector<OutcomeClass>> outcome_labels;
  State goal;

  static RewardSpec from_rules(std::span<const MenidRule> rules, double success_reward,
                               double failure_penalty, State goal = {});

  double reward(const std::string& rule_id, std::size_t outcome_index) const;
  double reward(OutcomeClass c) const;
};

struct Transition {
  State next;
  double probability = 0.0;
  std::string rule_id;
  std::size_t outcome = 0;
};

// Empirical one-step transition model. Pairs (s, a) with no triggering rule
// are absent, i.e. every transition from them has probability zero.
struct TransitionModel {
  std::map<State, std::map<GroundedAction, std::vector<Transition>>> entries;

  const std::vector<Transition>* find(const State& s, const GroundedAction& a) const;
  // P(s, a, s'), summed over outcomes that lead to the same successor.
  double probability(const State& s, const GroundedAction& a, const State& next) const;
  std::size_t state_count() const;
};

// Maps a rule to the outcome distribution the planner should use.
using Estimator = std::function<ProbVector(const MenidRule&)>;

// Decreasing-m-estimate over the rule's target and test counts; the uniform
// distribution while both are empty.
ProbVector fused_estimate(const MenidRule& rule, double m);
Estimator fused_estimator(double m);

// Adds the entries of `state` for every action in `actions` with a
// triggering rule: one transition per explicit outcome plus the noise
// outcome, whose successor is the state itself.
TransitionModel build_transition_model(std::span<const MenidRule> rules, const State& state,
                                       std::span<const GroundedAction> actions,
                                       const Estimator& estimator);

inline constexpr std::size_t kDefaultNodeCap = 100'000;

// Breadth-first expansion from `root` to depth `horizon` using
// enumerate_actions in each state. States satisfying the reward's goal are
// terminal and not expanded. Throws StateSpaceExplosion past `node_cap`
// states.
TransitionModel build_reachable_model(std::span<const MenidRule> rules, const State& root,
                                      const Estimator& estimator, const RewardSpec& reward,
                                      std::size_t horizon, std::size_t node_cap = kDefaultNodeCap);

struct Decision {
  double value = 0.0;
  std::optional<GroundedAction> action;  // none for states without actions
};

// Finite-horizon value iteration from V_0 = 0. Ties between actions go to
// the lexicographically smallest action.
std::map<State, Decision> value_iteration(const TransitionModel& model, const RewardSpec& reward,
                                          std::size_t horizon, double discount);

// Posterior sampling over one step: each candidate's rule draws an outcome
// distribution from Dir(1 + target + w * test), w = m / sqrt(1 + N_target);
// the action with the largest expected reward under its draw wins.
GroundedAction select_action_thompson(std::span<const MenidRule> rules, const State& state,
                                      std::span<const GroundedAction> actions,
                                      const RewardSpec& reward, double m, Rng& rng);

// Solves the reachable model around `state` and returns the root's action.
GroundedAction select_action_value_iteration(std::span<const MenidRule> rules,
                                             const State& state, const RewardSpec& reward,
                                             double m, std::size_t horizon, double discount,
                                             std::size_t node_cap = kDefaultNodeCap);

}  // namespace menid
