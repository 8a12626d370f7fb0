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

#include "menid/learner.hpp"

#include <cmath>

#include "menid/csv.hpp"
#include "menid/errors.hpp"
#include "menid/estimation.hpp"
#include "menid/rule_engine.hpp"

namespace menid {

std::string_view to_string(Solver solver) {
  return solver == Solver::thompson ? "thompson" : "value_iteration";
}

Solver parse_solver(std::string_view text) {
  if (text == "thompson") return Solver::thompson;
  if (text == "value_iteration") return Solver::value_iteration;
  throw InvalidParameter("unknown solver '" + std::string(text) + "'");
}

void LearnerConfig::validate() const {
  if (!(test_time >= 0.0) || !std::isfinite(test_time)) {
    throw InvalidParameter("T must be a non-negative number of seconds");
  }
  if (!(delta_threshold > 0.0 && delta_threshold < 1.0)) {
    throw InvalidParameter("delta_threshold must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParameter("m must be positive");
  if (!(total_budget > 0.0) || !std::isfinite(total_budget)) {
    throw InvalidParameter("total_budget must be positive");
  }
  if (delta_samples < kMinDeltaSamples) {
    throw InvalidParameter("delta_S must be at least " + std::to_string(kMinDeltaSamples));
  }
  if (horizon < 1) throw InvalidParameter("horizon must be at least 1");
  if (!(discount > 0.0 && discount <= 1.0)) throw InvalidParameter("discount must be in (0, 1]");
}

std::size_t ExperienceLog::count(EnvKind kind) const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.experience.env_label == kind;
  return n;
}

std::string ExperienceLog::to_csv() const {
  std::string out =
      csv_line({"sim_time", "env_label", "action", "rule_id", "outcome_index", "reward",
                "cum_reward"});
  for (const auto& e : entries) {
    out += csv_line({format_real(e.sim_time), std::string(to_string(e.experience.env_label)),
                     e.experience.action.str(), e.rule_id, std::to_string(e.outcome_index),
                     format_real(e.reward), format_real(e.cum_reward)});
  }
  return out;
}

Learner::Learner(LearnerConfig config, std::vector<MenidRule> rules, RewardSpec reward)
    : config_(config),
      rules_(std::move(rules)),
      reward_(std::move(reward)),
      delta_rng_(make_stream(config.seed, "learner")),
      solver_rng_(make_stream(config.seed, "solver")),
      target_rng_(make_stream(config.seed, "env-target")),
      test_rng_(make_stream(config.seed, "env-test")) {
  config_.validate();
}

bool Learner::fits(double latency) const {
  return clock_.now() + latency <= config_.total_budget * (1.0 + 1e-12);
}

bool Learner::should_test(const MenidRule& rule, const GroundedAction& action) {
  if (marks_.is_marked(action)) return false;
  const CountVector& test = rule.counts_for(EnvKind::test);
  const double eps[] = {config_.epsilon};
  double delta = 0.0;
  if (test.total() == 0) {
    const std::vector<double> alpha(test.size(), 1.0);
    const std::vector<double> uniform(test.size(), 1.0 / static_cast<double>(test.size()));
    delta = delta_bounds_from(alpha, uniform, eps, config_.delta_samples, delta_rng_).front();
  } else {
    delta = delta_bounds(test, eps, config_.delta_samples, delta_rng_).front();
  }
  return delta > config_.delta_threshold;
}

void Learner::append(const Experience& exp) {
  auto match = triggering_rule(exp.s, rules_, exp.action);
  if (!match) {
    throw Error("experience for " + exp.action.str() + " has no triggering rule");
  }
  LogEntry entry{exp, clock_.now(), match->rule->rule_id,
                 classify_outcome(*match->rule, match->binding, exp.s, exp.s_next), 0.0, 0.0};
  const double before = log_.score();
  if (exp.env_label == EnvKind::target) {
    entry.reward = reward_.reward(entry.rule_id, entry.outcome_index);
    entry.cum_reward = before + entry.reward;
    log_.reward_trace.emplace_back(entry.sim_time, entry.cum_reward);
  } else {
    entry.cum_reward = before;
  }
  log_.entries.push_back(std::move(entry));
}

bool Learner::test_phase(Environment& test_env, const State& state,
                         const GroundedAction& action) {
  double remaining = config_.test_time;
  double charged = 0.0;
  while (remaining > 0.0) {
    if (!fits(test_env.latency(action))) return false;
    test_env.set_state(state);
    const Experience exp = test_env.execute(action, test_rng_);
    clock_.advance(exp.elapsed);
    marks_.mark(action);
    append(exp);
    remaining -= exp.elapsed;
    charged += exp.elapsed;
  }
  if (charged > 0.0) log_.test_phases.push_back(charged);
  return true;
}

bool Learner::execute_phase(Environment& target_env, const GroundedAction& action) {
  if (!fits(target_env.latency(action))) return false;
  marks_.unmark(action);
  const Experience exp = target_env.execute(action, target_rng_);
  clock_.advance(exp.elapsed);
  append(exp);
  return true;
}

void Learner::update_rules(std::span<const Experience> fresh) {
  for (const auto& exp : fresh) {
    auto match = triggering_rule(exp.s, rules_, exp.action);
    if (!match) {
      throw Error("experience for " + exp.action.str() + " has no triggering rule");
    }
    MenidRule& rule = rules_[match->index];
    const std::size_t outcome = classify_outcome(rule, match->binding, exp.s, exp.s_next);
    rule.counts_for(exp.env_label).increment(outcome);
  }
  for (auto& rule : rules_) {
    const CountVector& target = rule.counts_for(EnvKind::target);
    const CountVector& test = rule.counts_for(EnvKind::test);
    if (target.total() + test.total() > 0) {
      rule.probs[env_index(EnvKind::target)] = m_estimate(target, test, config_.m);
    }
    if (test.total() > 0) rule.probs[env_index(EnvKind::test)] = empirical_estimate(test);
  }
}

GroundedAction Learner::choose(const State& state, std::span<const GroundedAction> actions) {
  if (config_.solver == Solver::value_iteration) {
    return select_action_value_iteration(rules_, state, reward_, config_.m, config_.horizon,
                                         config_.discount);
  }
  return select_action_thompson(rules_, state, actions, reward_, config_.m, solver_rng_);
}

ExperienceLog Learner::run(Environment& target_env, Environment& test_env) {
  if (target_env.kind() != EnvKind::target || test_env.kind() != EnvKind::test) {
    throw ConfigError("learner needs one target and one test environment");
  }
  std::size_t steps = 0;
  bool just_reset = false;
  std::vector<Experience> fresh;
  while (true) {
    const State state = target_env.current_state();
    const auto actions = enumerate_actions(rules_, state);
    if (actions.empty()) {
      if (just_reset) {
        throw NoApplicableAction("no applicable action in the initial state {" +
                                 state.serialize() + "}");
      }
      ++log_.failed_episodes;
      log_.reward_trace.emplace_back(clock_.now(), log_.score() - reward_.failure_penalty);
      target_env.reset();
      steps = 0;
      just_reset = true;
      continue;
    }
    just_reset = false;

    const GroundedAction action = choose(state, actions);
    auto match = triggering_rule(state, rules_, action);
    if (!match) throw NoApplicableAction("solver chose inapplicable " + action.str());

    const std::size_t first_new = log_.entries.size();
    bool in_budget = true;
    if (config_.test_time > 0.0 && should_test(*match->rule, action)) {
      in_budget = test_phase(test_env, state, action);
    } else {
      in_budget = execute_phase(target_env, action);
      if (in_budget) {
        ++steps;
        if (target_env.is_goal(target_env.current_state()) || steps >= target_env.max_steps()) {
          target_env.reset();
          steps = 0;
        }
      }
    }

    fresh.clear();
    for (std::size_t i = first_new; i < log_.entries.size(); ++i) {
      fresh.push_back(log_.entries[i].experience);
    }
    update_rules(fresh);
    if (!in_budget) break;
  }
  return log_;
}

ExperienceLog run_learner(const LearnerConfig& config, Environment& target_env,
                          Environment& test_env, std::vector<MenidRule> rules,
                          const RewardSpec& reward) {
  Learner learner(config, std::move(rules), reward);
  return learner.run(target_env, test_env);
}

}  // namespace menid
