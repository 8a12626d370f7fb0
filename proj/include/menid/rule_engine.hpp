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

#include <optional>
#include <span>
#include <vector>

#include "menid/rule.hpp"
#include "menid/symbols.hpp"

namespace menid {

// Substitutes bound variables; throws ConfigError on an unbound variable.
Predicate substitute(const Predicate& pattern, const Binding& binding);

// Binds the action parameters to `action.args` and searches the state for
// deictic bindings that satisfy the whole precondition. Returns nullopt when
// none exists and throws AmbiguousDeictic when more than one does.
// Precondition: action.name == rule.action_name and the arities agree
// (InvalidParameter otherwise).
std::optional<Binding> ground_rule(const MenidRule& rule, const State& state,
                                   const GroundedAction& action);

struct RuleMatch {
  std::size_t index;  // position in the rule list
  const MenidRule* rule;
  Binding binding;
};

// Rules of `action` whose precondition holds in `state`. Throws
// OverlappingRules when more than one triggers.
std::vector<RuleMatch> applicable_rules(const State& state, std::span<const MenidRule> rules,
                                        const GroundedAction& action);

// The unique triggering rule, or nullopt.
std::optional<RuleMatch> triggering_rule(const State& state, std::span<const MenidRule> rules,
                                         const GroundedAction& action);

// (state \ del) u add for explicit outcome `outcome_index` (1-based; index 0
// is the noise outcome and throws NoiseNotApplicable).
State apply_outcome(const State& state, const MenidRule& rule, const Binding& binding,
                    std::size_t outcome_index);

// Smallest explicit outcome index reproducing `next` from `state`, or 0 when
// no explicit outcome explains the transition.
std::size_t classify_outcome(const MenidRule& rule, const Binding& binding, const State& state,
                             const State& next);

// All grounded actions (arguments drawn from the state's constants) with a
// triggering rule, in lexicographic order.
std::vector<GroundedAction> enumerate_actions(std::span<const MenidRule> rules,
                                              const State& state);

}  // namespace menid
