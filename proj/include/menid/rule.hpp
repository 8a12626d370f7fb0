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

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "menid/categorical.hpp"
#include "menid/symbols.hpp"

namespace menid {

// The two environments a rule keeps statistics for. The target is the
// authoritative, costly one; the test environment is its cheap proxy.
enum class EnvKind { target = 0, test = 1 };

inline constexpr std::size_t kEnvCount = 2;

inline std::size_t env_index(EnvKind kind) { return static_cast<std::size_t>(kind); }
std::string_view to_string(EnvKind kind);
EnvKind parse_env_kind(std::string_view text);

// Variable name -> constant.
using Binding = std::map<std::string, std::string>;

struct Outcome {
  std::string label;
  std::vector<Predicate> add;
  std::vector<Predicate> del;
  bool is_noise = false;
  // Optional reward class from the rule file ("success", "failure",
  // "neutral"); empty when the file leaves it to the label.
  std::string reward;
};

// Explicit outcome as written in a rule file.
struct OutcomeSpec {
  std::string label;
  std::vector<std::string> add;
  std::vector<std::string> del;
  std::string reward;
};

// A relational action rule with one outcome distribution per environment.
// outcomes[0] is always the noise outcome; outcomes[1..] are explicit.
struct MenidRule {
  std::string rule_id;
  std::string action_name;
  std::vector<std::string> params;   // action parameters
  std::vector<std::string> deictic;  // references bound through the precondition
  std::vector<Predicate> precondition;
  std::vector<Outcome> outcomes;
  std::array<CountVector, kEnvCount> counts;
  std::array<std::optional<ProbVector>, kEnvCount> probs;

  std::size_t outcome_count() const { return outcomes.size(); }
  std::size_t explicit_outcome_count() const { return outcomes.size() - 1; }

  const CountVector& counts_for(EnvKind kind) const { return counts[env_index(kind)]; }
  CountVector& counts_for(EnvKind kind) { return counts[env_index(kind)]; }
};

// Builds a rule with the implicit noise outcome prepended and zeroed counts.
// Throws ConfigError when a structural invariant fails. Warnings (e.g. two
// explicit outcomes with identical effects) are appended to `warnings` when
// given.
MenidRule make_rule(std::string rule_id, std::string action_name,
                    std::vector<std::string> params, std::vector<std::string> deictic,
                    const std::vector<std::string>& precondition,
                    const std::vector<OutcomeSpec>& outcomes,
                    std::vector<std::string>* warnings = nullptr);

// A concrete, executable action instance.
struct GroundedAction {
  std::string name;
  std::vector<std::string> args;

  std::string str() const;
  static GroundedAction parse(std::string_view text);

  auto operator<=>(const GroundedAction&) const = default;
  bool operator==(const GroundedAction&) const = default;
};

}  // namespace menid
