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

#include "menid/rule_engine.hpp"

#include <map>
#include <set>

#include "menid/errors.hpp"

namespace menid {
namespace {

constexpr std::size_t kMaxEnumeratedActions = 1'000'000;

// Extends `binding` so that `pattern` maps onto the ground predicate `fact`.
bool unify(const Predicate& pattern, const Predicate& fact, Binding& binding) {
  if (pattern.name != fact.name || pattern.args.size() != fact.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const std::string& term = pattern.args[i];
    if (!is_variable(term)) {
      if (term != fact.args[i]) return false;
      continue;
    }
    auto [it, inserted] = binding.emplace(term, fact.args[i]);
    if (!inserted && it->second != fact.args[i]) return false;
  }
  return true;
}

struct DeicticSearch {
  const std::vector<Predicate>& pre;
  const std::vector<std::string>& deictic;
  const State& state;
  std::set<Binding> found;

  void run(std::size_t k, const Binding& binding) {
    if (found.size() > 1) return;
    if (k == pre.size()) {
      Binding projected;
      for (const auto& d : deictic) projected.emplace(d, binding.at(d));
      found.insert(std::move(projected));
      return;
    }
    const Predicate& pattern = pre[k];
    auto it = state.predicates().lower_bound(Predicate{pattern.name, {}});
    for (; it != state.end() && it->name == pattern.name; ++it) {
      Binding extended = binding;
      if (unify(pattern, *it, extended)) run(k + 1, extended);
      if (found.size() > 1) return;
    }
  }
};

std::string describe(const Binding& b) {
  std::string out = "{";
  for (const auto& [k, v] : b) {
    if (out.size() > 1) out += ", ";
    out += k + "->" + v;
  }
  return out + "}";
}

}  // namespace

Predicate substitute(const Predicate& pattern, const Binding& binding) {
  Predicate out{pattern.name, {}};
  out.args.reserve(pattern.args.size());
  for (const auto& a : pattern.args) {
    if (!is_variable(a)) {
      out.args.push_back(a);
      continue;
    }
    auto it = binding.find(a);
    if (it == binding.end()) {
      throw ConfigError("unbound variable '" + a + "' in " + pattern.str());
    }
    out.args.push_back(it->second);
  }
  return out;
}

std::optional<Binding> ground_rule(const MenidRule& rule, const State& state,
                                   const GroundedAction& action) {
  if (action.name != rule.action_name || action.args.size() != rule.params.size()) {
    throw InvalidParameter("action " + action.str() + " does not match rule '" + rule.rule_id +
                           "'");
  }
  Binding binding;
  for (std::size_t i = 0; i < rule.params.size(); ++i) {
    binding.emplace(rule.params[i], action.args[i]);
  }
  DeicticSearch search{rule.precondition, rule.deictic, state, {}};
  search.run(0, binding);
  if (search.found.empty()) return std::nullopt;
  if (search.found.size() > 1) {
    auto it = search.found.begin();
    const std::string first = describe(*it++);
    throw AmbiguousDeictic("rule '" + rule.rule_id + "' for " + action.str() +
                           " has several deictic bindings, e.g. " + first + " and " +
                           describe(*it));
  }
  for (const auto& [var, value] : *search.found.begin()) binding.emplace(var, value);
  return binding;
}

std::vector<RuleMatch> applicable_rules(const State& state, std::span<const MenidRule> rules,
                                        const GroundedAction& action) {
  std::vector<RuleMatch> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const MenidRule& rule = rules[i];
    if (rule.action_name != action.name || rule.params.size() != action.args.size()) continue;
    if (auto b = ground_rule(rule, state, action)) {
      out.push_back(RuleMatch{i, &rule, std::move(*b)});
    }
  }
  if (out.size() > 1) {
    throw OverlappingRules("rules '" + out[0].rule->rule_id + "' and '" + out[1].rule->rule_id +
                           "' both trigger for " + action.str());
  }
  return out;
}

std::optional<RuleMatch> triggering_rule(const State& state, std::span<const MenidRule> rules,
                                         const GroundedAction& action) {
  auto matches = applicable_rules(state, rules, action);
  if (matches.empty()) return std::nullopt;
  return std::move(matches.front());
}

State apply_outcome(const State& state, const MenidRule& rule, const Binding& binding,
                    std::size_t outcome_index) {
  if (outcome_index == 0) {
    throw NoiseNotApplicable("the noise outcome of rule '" + rule.rule_id +
                             "' has no deterministic effect");
  }
  if (outcome_index >= rule.outcomes.size()) {
    throw IndexOutOfRange("rule '" + rule.rule_id + "' has no outcome " +
                          std::to_string(outcome_index));
  }
  const Outcome& outcome = rule.outcomes[outcome_index];
  State::Set next = state.predicates();
  for (const auto& d : outcome.del) next.erase(substitute(d, binding));
  for (const auto& a : outcome.add) next.insert(substitute(a, binding));
  return State(std::move(next));
}

std::size_t classify_outcome(const MenidRule& rule, const Binding& binding, const State& state,
                             const State& next) {
  for (std::size_t i = 1; i < rule.outcomes.size(); ++i) {
    if (apply_outcome(state, rule, binding, i) == next) return i;
  }
  return 0;
}

std::vector<GroundedAction> enumerate_actions(std::span<const MenidRule> rules,
                                              const State& state) {
  std::map<std::string, std::size_t> arity;
  for (const auto& r : rules) arity.emplace(r.action_name, r.params.size());
  const std::vector<std::string> constants = state.constants();

  std::vector<GroundedAction> out;
  for (const auto& [name, k] : arity) {
    if (k > 0 && constants.empty()) continue;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) {
      combos *= constants.size();
      if (combos > kMaxEnumeratedActions) {
        throw StateSpaceExplosion("too many groundings for action '" + name + "'");
      }
    }
    std::vector<std::size_t> digits(k, 0);
    for (std::size_t n = 0; n < combos; ++n) {
      GroundedAction action{name, {}};
      for (std::size_t d : digits) action.args.push_back(constants[d]);
      if (!applicable_rules(state, rules, action).empty()) out.push_back(std::move(action));
      for (std::size_t pos = k; pos-- > 0;) {
        if (++digits[pos] < constants.size()) break;
        digits[pos] = 0;
      }
    }
  }
  return out;
}

}  // namespace menid
