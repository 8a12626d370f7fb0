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

#include "menid/planning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "menid/errors.hpp"
#include "menid/estimation.hpp"
#include "menid/rule_engine.hpp"

namespace menid {

OutcomeClass outcome_class(const Outcome& outcome) {
  if (outcome.is_noise) return OutcomeClass::failure;
  const std::string& tag = outcome.reward.empty() ? outcome.label : outcome.reward;
  if (tag == "success") return OutcomeClass::success;
  if (tag == "failure" || tag == "fail") return OutcomeClass::failure;
  if (!outcome.reward.empty() && tag != "neutral") {
    throw ConfigError("unknown reward class '" + tag + "' on outcome '" + outcome.label + "'");
  }
  return OutcomeClass::neutral;
}

RewardSpec RewardSpec::from_rules(std::span<const MenidRule> rules, double success_reward,
                                  double failure_penalty, State goal) {
  if (!std::isfinite(success_reward)) throw InvalidParameter("success reward must be finite");
  if (!(failure_penalty >= 0.0) || !std::isfinite(failure_penalty)) {
    throw InvalidParameter("failure penalty must be a non-negative number");
  }
  RewardSpec spec;
  spec.success_reward = success_reward;
  spec.failure_penalty = failure_penalty;
  spec.goal = std::move(goal);
  for (const auto& rule : rules) {
    auto& labels = spec.outcome_labels[rule.rule_id];
    for (const auto& o : rule.outcomes) labels.push_back(outcome_class(o));
  }
  return spec;
}

double RewardSpec::reward(OutcomeClass c) const {
  switch (c) {
    case OutcomeClass::success:
      return success_reward;
    case OutcomeClass::failure:
      return -failure_penalty;
    case OutcomeClass::neutral:
      break;
  }
  return 0.0;
}

double RewardSpec::reward(const std::string& rule_id, std::size_t outcome_index) const {
  auto it = outcome_labels.find(rule_id);
  if (it == outcome_labels.end()) throw ConfigError("no reward labels for rule '" + rule_id + "'");
  if (outcome_index >= it->second.size()) {
    throw IndexOutOfRange("rule '" + rule_id + "' has no outcome " +
                          std::to_string(outcome_index));
  }
  return reward(it->second[outcome_index]);
}

const std::vector<Transition>* TransitionModel::find(const State& s,
                                                     const GroundedAction& a) const {
  auto si = entries.find(s);
  if (si == entries.end()) return nullptr;
  auto ai = si->second.find(a);
  return ai == si->second.end() ? nullptr : &ai->second;
}

double TransitionModel::probability(const State& s, const GroundedAction& a,
                                    const State& next) const {
  const auto* list = find(s, a);
  if (!list) return 0.0;
  double p = 0.0;
  for (const auto& t : *list) {
    if (t.next == next) p += t.probability;
  }
  return p;
}

std::size_t TransitionModel::state_count() const {
  std::set<State> all;
  for (const auto& [s, actions] : entries) {
    all.insert(s);
    for (const auto& [a, list] : actions) {
      for (const auto& t : list) all.insert(t.next);
    }
  }
  return all.size();
}

ProbVector fused_estimate(const MenidRule& rule, double m) {
  const CountVector& target = rule.counts_for(EnvKind::target);
  const CountVector& test = rule.counts_for(EnvKind::test);
  if (target.total() + test.total() == 0) return ProbVector::uniform(rule.outcome_count());
  return m_estimate(target, test, m);
}

Estimator fused_estimator(double m) {
  return [m](const MenidRule& rule) { return fused_estimate(rule, m); };
}

namespace {

void add_state_entries(TransitionModel& model, std::span<const MenidRule> rules,
                       const State& state, std::span<const GroundedAction> actions,
                       const Estimator& estimator) {
  for (const auto& action : actions) {
    auto match = triggering_rule(state, rules, action);
    if (!match) continue;
    const MenidRule& rule = *match->rule;
    const ProbVector q = estimator(rule);
    if (q.size() != rule.outcome_count()) {
      throw LengthMismatch("estimate for rule '" + rule.rule_id + "' has the wrong length");
    }
    std::vector<Transition> list;
    list.reserve(rule.outcome_count());
    for (std::size_t i = 1; i < rule.outcome_count(); ++i) {
      list.push_back({apply_outcome(state, rule, match->binding, i), q[i], rule.rule_id, i});
    }
    list.push_back({state, q[0], rule.rule_id, 0});
    model.entries[state][action] = std::move(list);
  }
}

}  // namespace

TransitionModel build_transition_model(std::span<const MenidRule> rules, const State& state,
                                       std::span<const GroundedAction> actions,
                                       const Estimator& estimator) {
  TransitionModel model;
  add_state_entries(model, rules, state, actions, estimator);
  return model;
}

TransitionModel build_reachable_model(std::span<const MenidRule> rules, const State& root,
                                      const Estimator& estimator, const RewardSpec& reward,
                                      std::size_t horizon, std::size_t node_cap) {
  TransitionModel model;
  std::set<State> seen{root};
  std::deque<std::pair<State, std::size_t>> frontier{{root, 0}};
  while (!frontier.empty()) {
    auto [state, depth] = std::move(frontier.front());
    frontier.pop_front();
    if (depth >= horizon) continue;
    if (!reward.goal.empty() && includes(state, reward.goal)) continue;
    const auto actions = enumerate_actions(rules, state);
    add_state_entries(model, rules, state, actions, estimator);
    auto it = model.entries.find(state);
    if (it == model.entries.end()) continue;
    for (const auto& [action, list] : it->second) {
      for (const auto& t : list) {
        if (!seen.insert(t.next).second) continue;
        if (seen.size() > node_cap) {
          throw StateSpaceExplosion("reachable state space exceeds " + std::to_string(node_cap) +
                                    " states");
        }
        frontier.emplace_back(t.next, depth + 1);
      }
    }
  }
  return model;
}

std::map<State, Decision> value_iteration(const TransitionModel& model, const RewardSpec& reward,
                                          std::size_t horizon, double discount) {
  if (horizon < 1) throw InvalidParameter("horizon must be at least 1");
  if (!(discount > 0.0 && discount <= 1.0)) throw InvalidParameter("discount must be in (0, 1]");

  std::map<State, Decision> decisions;
  for (const auto& [s, actions] : model.entries) {
    decisions.emplace(s, Decision{});
    for (const auto& [a, list] : actions) {
      for (const auto& t : list) decisions.emplace(t.next, Decision{});
    }
  }

  std::map<State, double> value;
  for (const auto& [s, d] : decisions) value.emplace(s, 0.0);

  for (std::size_t k = 0; k < horizon; ++k) {
    std::map<State, double> next_value = value;
    const bool last = k + 1 == horizon;
    for (const auto& [s, actions] : model.entries) {
      double best = 0.0;
      const GroundedAction* best_action = nullptr;
      for (const auto& [a, list] : actions) {
        double q = 0.0;
        for (const auto& t : list) {
          q += t.probability * (reward.reward(t.rule_id, t.outcome) + discount * value.at(t.next));
        }
        if (!best_action || q > best) {
          best = q;
          best_action = &a;
        }
      }
      if (!best_action) continue;
      next_value[s] = best;
      if (last) decisions[s] = Decision{best, *best_action};
    }
    value = std::move(next_value);
  }
  return decisions;
}

GroundedAction select_action_thompson(std::span<const MenidRule> rules, const State& state,
                                      std::span<const GroundedAction> actions,
                                      const RewardSpec& reward, double m, Rng& rng) {
  std::vector<std::pair<const GroundedAction*, const MenidRule*>> candidates;
  for (const auto& a : actions) {
    if (auto match = triggering_rule(state, rules, a)) candidates.emplace_back(&a, match->rule);
  }
  if (candidates.empty()) {
    throw NoApplicableAction("no applicable action in {" + state.serialize() + "}");
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& x, const auto& y) { return *x.first < *y.first; });
  if (candidates.size() == 1) return *candidates.front().first;

  double best = 0.0;
  const GroundedAction* best_action = nullptr;
  std::vector<double> alpha;
  for (const auto& [action, rule] : candidates) {
    const CountVector& target = rule->counts_for(EnvKind::target);
    const CountVector& test = rule->counts_for(EnvKind::test);
    const double w = test_weight(target.total(), m);
    alpha.assign(rule->outcome_count(), 1.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      alpha[i] += static_cast<double>(target[i]) + w * static_cast<double>(test[i]);
    }
    const ProbVector p = sample_dirichlet(alpha, rng);
    double expected = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) expected += p[i] * reward.reward(rule->rule_id, i);
    if (!best_action || expected > best) {
      best = expected;
      best_action = action;
    }
  }
  return *best_action;
}

GroundedAction select_action_value_iteration(std::span<const MenidRule> rules,
                                             const State& state, const RewardSpec& reward,
                                             double m, std::size_t horizon, double discount,
                                             std::size_t node_cap) {
  const TransitionModel model =
      build_reachable_model(rules, state, fused_estimator(m), reward, horizon, node_cap);
  const auto decisions = value_iteration(model, reward, horizon, discount);
  auto it = decisions.find(state);
  if (it == decisions.end() || !it->second.action) {
    throw NoApplicableAction("no applicable action in {" + state.serialize() + "}");
  }
  return *it->second.action;
}

}  // namespace menid
