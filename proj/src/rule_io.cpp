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

#include "menid/rule_io.hpp"

#include <fstream>
#include <map>
#include <set>

#include "menid/errors.hpp"

namespace menid {
namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& obj, const char* key, bool required,
                                     const std::string& context) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(context + ": missing '" + key + "'");
    return {};
  }
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(context + ": '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw ConfigError(context + ": '" + key + "' entries must be strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_string(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw ConfigError(context + ": missing string '" + key + "'");
  }
  return obj.at(key).get<std::string>();
}

void record_arity(std::map<std::string, std::size_t>& arity, const Predicate& p,
                  const std::string& context) {
  auto [it, inserted] = arity.emplace(p.name, p.arity());
  if (!inserted && it->second != p.arity()) {
    throw ConfigError(context + ": predicate '" + p.name + "' used with arity " +
                      std::to_string(p.arity()) + " and " + std::to_string(it->second));
  }
}

std::map<std::string, std::size_t> predicate_arities(const std::vector<MenidRule>& rules) {
  std::map<std::string, std::size_t> arity;
  for (const auto& r : rules) {
    const std::string ctx = "rule '" + r.rule_id + "'";
    for (const auto& p : r.precondition) record_arity(arity, p, ctx);
    for (const auto& o : r.outcomes) {
      for (const auto& p : o.add) record_arity(arity, p, ctx);
      for (const auto& p : o.del) record_arity(arity, p, ctx);
    }
  }
  return arity;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

RuleSet parse_rule_set(const json& doc) {
  if (!doc.is_array()) throw ConfigError("rule set must be a JSON array");
  RuleSet set;
  for (std::size_t n = 0; n < doc.size(); ++n) {
    const json& obj = doc[n];
    std::string context = "rule #" + std::to_string(n);
    if (!obj.is_object()) throw ConfigError(context + " is not an object");
    std::string id = required_string(obj, "rule_id", context);
    context = "rule '" + id + "'";
    std::string action = required_string(obj, "action", context);
    auto params = string_list(obj, "params", false, context);
    auto deictic = string_list(obj, "deictic", false, context);
    auto pre = string_list(obj, "pre", false, context);
    if (!obj.contains("outcomes") || !obj.at("outcomes").is_array()) {
      throw ConfigError(context + ": missing 'outcomes' array");
    }
    std::vector<OutcomeSpec> outcomes;
    for (const auto& o : obj.at("outcomes")) {
      if (!o.is_object()) throw ConfigError(context + ": outcome is not an object");
      OutcomeSpec spec;
      spec.label = o.value("label", std::string{});
      spec.add = string_list(o, "add", false, context);
      spec.del = string_list(o, "del", false, context);
      spec.reward = o.value("reward", std::string{});
      outcomes.push_back(std::move(spec));
    }
    set.rules.push_back(make_rule(std::move(id), std::move(action), std::move(params),
                                  std::move(deictic), pre, outcomes, &set.warnings));
  }
  check_rule_set(set.rules);
  return set;
}

RuleSet load_rule_set(const std::filesystem::path& path) {
  try {
    return parse_rule_set(read_json_file(path));
  } catch (const ParseError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void check_rule_set(const std::vector<MenidRule>& rules) {
  if (rules.empty()) throw ConfigError("rule set is empty");
  std::set<std::string> ids;
  std::map<std::string, std::size_t> action_arity;
  for (const auto& r : rules) {
    if (!ids.insert(r.rule_id).second) {
      throw ConfigError("duplicate rule_id '" + r.rule_id + "'");
    }
    auto [it, inserted] = action_arity.emplace(r.action_name, r.params.size());
    if (!inserted && it->second != r.params.size()) {
      throw ConfigError("action '" + r.action_name + "' has rules with different arities");
    }
  }
  predicate_arities(rules);
}

void check_state_arity(const std::vector<MenidRule>& rules, const State& state,
                       const std::string& context) {
  auto arity = predicate_arities(rules);
  for (const auto& p : state) record_arity(arity, p, context);
}

}  // namespace menid
