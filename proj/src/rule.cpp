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

#include "menid/rule.hpp"

#include <algorithm>
#include <set>

#include "menid/errors.hpp"

namespace menid {
namespace {

std::vector<Predicate> parse_all(const std::vector<std::string>& items) {
  std::vector<Predicate> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(parse_predicate(s));
  return out;
}

void require_variables(const std::vector<std::string>& vars, std::string_view what,
                       const std::string& rule_id) {
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!is_variable(v) || v.size() < 2) {
      throw ConfigError("rule '" + rule_id + "': " + std::string(what) + " entry '" + v +
                        "' is not a variable");
    }
    if (!seen.insert(v).second) {
      throw ConfigError("rule '" + rule_id + "': duplicate variable '" + v + "'");
    }
  }
}

void require_bound(const std::vector<Predicate>& preds, const std::set<std::string>& chi,
                   std::string_view where, const std::string& rule_id) {
  for (const auto& p : preds) {
    for (const auto& a : p.args) {
      if (is_variable(a) && !chi.count(a)) {
        throw ConfigError("rule '" + rule_id + "': variable '" + a + "' in " +
                          std::string(where) + " is neither a parameter nor deictic");
      }
    }
  }
}

}  // namespace

std::string_view to_string(EnvKind kind) {
  return kind == EnvKind::target ? "target" : "test";
}

EnvKind parse_env_kind(std::string_view text) {
  if (text == "target") return EnvKind::target;
  if (text == "test") return EnvKind::test;
  throw ConfigError("unknown environment kind '" + std::string(text) + "'");
}

MenidRule make_rule(std::string rule_id, std::string action_name,
                    std::vector<std::string> params, std::vector<std::string> deictic,
                    const std::vector<std::string>& precondition,
                    const std::vector<OutcomeSpec>& outcomes,
                    std::vector<std::string>* warnings) {
  if (rule_id.empty()) throw ConfigError("rule with empty rule_id");
  if (action_name.empty()) throw ConfigError("rule '" + rule_id + "' has no action");
  require_variables(params, "params", rule_id);
  require_variables(deictic, "deictic", rule_id);

  std::set<std::string> chi(params.begin(), params.end());
  for (const auto& d : deictic) {
    if (!chi.insert(d).second) {
      throw ConfigError("rule '" + rule_id + "': '" + d +
                        "' is both an action parameter and a deictic reference");
    }
  }

  MenidRule rule;
  rule.rule_id = std::move(rule_id);
  rule.action_name = std::move(action_name);
  rule.precondition = parse_all(precondition);
  require_bound(rule.precondition, chi, "precondition", rule.rule_id);

  for (const auto& d : deictic) {
    const bool anchored = std::any_of(
        rule.precondition.begin(), rule.precondition.end(), [&](const Predicate& p) {
          return std::find(p.args.begin(), p.args.end(), d) != p.args.end();
        });
    if (!anchored) {
      throw ConfigError("rule '" + rule.rule_id + "': deictic '" + d +
                        "' does not occur in the precondition");
    }
  }
  rule.params = std::move(params);
  rule.deictic = std::move(deictic);

  if (outcomes.empty()) {
    throw ConfigError("rule '" + rule.rule_id + "' has no explicit outcomes");
  }
  rule.outcomes.push_back(Outcome{"noise", {}, {}, true, ""});
  for (const auto& spec : outcomes) {
    if (spec.label == "noise") {
      throw ConfigError("rule '" + rule.rule_id +
                        "': the noise outcome is implicit and may not be listed");
    }
    Outcome o{spec.label, parse_all(spec.add), parse_all(spec.del), false, spec.reward};
    require_bound(o.add, chi, "outcome '" + o.label + "'", rule.rule_id);
    require_bound(o.del, chi, "outcome '" + o.label + "'", rule.rule_id);
    for (const auto& a : o.add) {
      if (std::find(o.del.begin(), o.del.end(), a) != o.del.end()) {
        throw ConfigError("rule '" + rule.rule_id + "': outcome '" + o.label +
                          "' both adds and deletes " + a.str());
      }
    }
    rule.outcomes.push_back(std::move(o));
  }

  if (warnings) {
    auto effect = [](const Outcome& o) {
      return std::make_pair(std::set<Predicate>(o.add.begin(), o.add.end()),
                            std::set<Predicate>(o.del.begin(), o.del.end()));
    };
    for (std::size_t i = 1; i < rule.outcomes.size(); ++i) {
      for (std::size_t j = i + 1; j < rule.outcomes.size(); ++j) {
        if (effect(rule.outcomes[i]) == effect(rule.outcomes[j])) {
          warnings->push_back("rule '" + rule.rule_id + "': outcomes " + std::to_string(i) +
                              " and " + std::to_string(j) +
                              " have identical effects; observations resolve to " +
                              std::to_string(i));
        }
      }
    }
  }

  for (auto& c : rule.counts) c = CountVector(rule.outcomes.size());
  return rule;
}

std::string GroundedAction::str() const { return Predicate{name, args}.str(); }

GroundedAction GroundedAction::parse(std::string_view text) {
  Predicate p = parse_predicate(text);
  if (!p.is_ground()) {
    throw ParseError("grounded action '" + std::string(text) + "' contains variables");
  }
  return GroundedAction{std::move(p.name), std::move(p.args)};
}

}  // namespace menid
