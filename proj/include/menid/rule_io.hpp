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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "menid/rule.hpp"

namespace menid {

// Reads and parses a JSON file; ConfigError names the path on failure.
nlohmann::json read_json_file(const std::filesystem::path& path);

struct RuleSet {
  std::vector<MenidRule> rules;
  std::vector<std::string> warnings;
};

// Rule-set document: an array of
//   {"rule_id", "action", "params": ["?x"], "deictic": ["?b"],
//    "pre": ["pcb(?x)"], "outcomes": [{"label", "add": [...], "del": [...]}]}
// The noise outcome is implicit at index 0. A "derived" member is accepted and
// ignored. Throws ConfigError on any validation failure.
RuleSet parse_rule_set(const nlohmann::json& doc);
RuleSet load_rule_set(const std::filesystem::path& path);

// Cross-rule checks: unique ids, one arity per predicate name and per action
// name. Throws ConfigError.
void check_rule_set(const std::vector<MenidRule>& rules);

// Checks that every predicate of `state` uses the arity the rule set expects.
void check_state_arity(const std::vector<MenidRule>& rules, const State& state,
                       const std::string& context);

}  // namespace menid
