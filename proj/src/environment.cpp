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

#include "menid/environment.hpp"

#include <chrono>
#include <cmath>

#include "menid/errors.hpp"
#include "menid/estimation.hpp"
#include "menid/rule_engine.hpp"
#include "menid/rule_io.hpp"

namespace menid {
namespace {

using nlohmann::json;

State state_from_json(const json& doc, const char* key, const std::string& context) {
  if (!doc.contains(key)) return {};
  const json& v = doc.at(key);
  if (!v.is_array()) throw ConfigError(context + ": '" + key + "' must be an array");
  std::vector<std::string> items;
  for (const auto& item : v) {
    if (!item.is_string()) throw ConfigError(context + ": '" + key + "' holds a non-string");
    items.push_back(item.get<std::string>());
  }
  try {
    return State::from_strings(items);
  } catch (const ParseError& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

bool goal_reached(const State& goal, const State& state) {
  return !goal.empty() && includes(state, goal);
}

}  // namespace

EnvironmentSpec parse_environment_spec(const json& doc) {
  if (!doc.is_object()) throw ConfigError("environment file must be a JSON object");
  EnvironmentSpec spec;
  if (!doc.contains("env_id") || !doc.at("env_id").is_string()) {
    throw ConfigError("environment: missing string 'env_id'");
  }
  spec.env_id = doc.at("env_id").get<std::string>();
  const std::string ctx = "environment '" + spec.env_id + "'";
  if (!doc.contains("kind") || !doc.at("kind").is_string()) {
    throw ConfigError(ctx + ": missing 'kind'");
  }
  spec.kind = parse_env_kind(doc.at("kind").get<std::string>());
  spec.initial_state = state_from_json(doc, "initial_state", ctx);
  spec.goal = state_from_json(doc, "goal", ctx);

  if (!doc.contains("latency") || !doc.at("latency").is_object()) {
    throw ConfigError(ctx + ": missing 'latency' object");
  }
  for (const auto& [action, value] : doc.at("latency").items()) {
    if (!value.is_number()) throw ConfigError(ctx + ": latency of '" + action + "' not a number");
    const double seconds = value.get<double>();
    if (!(seconds > 0.0) || !std::isfinite(seconds)) {
      throw ConfigError(ctx + ": latency of '" + action + "' must be positive");
    }
    spec.latency.emplace(action, seconds);
  }

  if (!doc.contains("ground_truth") || !doc.at("ground_truth").is_object()) {
    throw ConfigError(ctx + ": missing 'ground_truth' object");
  }
  for (const auto& [rule_id, value] : doc.at("ground_truth").items()) {
    if (!value.is_array()) throw ConfigError(ctx + ": ground truth of '" + rule_id + "'");
    std::vector<double> probs;
    for (const auto& p : value) {
      if (!p.is_number()) throw ConfigError(ctx + ": ground truth of '" + rule_id + "'");
      probs.push_back(p.get<double>());
    }
    try {
      spec.ground_truth.emplace(rule_id, ProbVector(std::move(probs)));
    } catch (const InvalidParameter& e) {
      throw ConfigError(ctx + ": ground truth of '" + rule_id + "': " + e.what());
    }
  }

  if (doc.contains("perturbation") && !doc.at("perturbation").is_null()) {
    const json& p = doc.at("perturbation");
    if (!p.is_object() || !p.contains("magnitude") || !p.at("magnitude").is_number()) {
      throw ConfigError(ctx + ": perturbation needs a numeric 'magnitude'");
    }
    Perturbation pert;
    pert.magnitude = p.at("magnitude").get<double>();
    if (!(pert.magnitude >= 0.0 && pert.magnitude <= 1.0)) {
      throw ConfigError(ctx + ": perturbation magnitude must lie in [0, 1]");
    }
    pert.seed = p.value("seed", std::uint64_t{0});
    spec.perturbation = pert;
  }

  const std::string noise = doc.value("noise_effect", std::string("none"));
  if (noise == "none") {
    spec.noise_effect = NoiseEffect::none;
  } else if (noise == "scramble") {
    spec.noise_effect = NoiseEffect::scramble;
  } else {
    throw ConfigError(ctx + ": unknown noise_effect '" + noise + "'");
  }
  if (doc.contains("max_steps")) {
    const json& m = doc.at("max_steps");
    if (!m.is_number_integer() || m.get<long long>() < 1) {
      throw ConfigError(ctx + ": max_steps must be a positive integer");
    }
    spec.max_steps = m.get<std::size_t>();
  }
  return spec;
}

EnvironmentSpec load_environment_spec(const std::filesystem::path& path) {
  try {
    return parse_environment_spec(read_json_file(path));
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.find(path.string()) != std::string::npos) throw;
    throw ConfigError(path.string() + ": " + what);
  }
}

json to_json(const EnvironmentSpec& spec) {
  json doc;
  doc["env_id"] = spec.env_id;
  doc["kind"] = std::string(to_string(spec.kind));
  doc["initial_state"] = spec.initial_state.to_strings();
  doc["goal"] = spec.goal.to_strings();
  doc["latency"] = json::object();
  for (const auto& [a, s] : spec.latency) doc["latency"][a] = s;
  doc["ground_truth"] = json::object();
  for (const auto& [r, p] : spec.ground_truth) doc["ground_truth"][r] = p.values();
  if (spec.perturbation) {
    doc["perturbation"] = {{"magnitude", spec.perturbation->magnitude},
                           {"seed", spec.perturbation->seed}};
  } else {
    doc["perturbation"] = nullptr;
  }
  doc["noise_effect"] = spec.noise_effect == NoiseEffect::none ? "none" : "scramble";
  doc["max_steps"] = spec.max_steps;
  return doc;
}

void check_environment_spec(const EnvironmentSpec& spec, std::span<const MenidRule> rules) {
  const std::string ctx = "environment '" + spec.env_id + "'";
  for (const auto& rule : rules) {
    auto it = spec.ground_truth.find(rule.rule_id);
    if (it == spec.ground_truth.end()) {
      throw ConfigError(ctx + ": no ground truth for rule '" + rule.rule_id + "'");
    }
    if (it->second.size() != rule.outcome_count()) {
      throw ConfigError(ctx + ": ground truth of '" + rule.rule_id + "' has " +
                        std::to_string(it->second.size()) + " entries, rule has " +
                        std::to_string(rule.outcome_count()) + " outcomes");
    }
    if (!spec.latency.count(rule.action_name)) {
      throw ConfigError(ctx + ": no latency for action '" + rule.action_name + "'");
    }
  }
  for (const auto& [rule_id, p] : spec.ground_truth) {
    bool known = false;
    for (const auto& r : rules) known = known || r.rule_id == rule_id;
    if (!known) throw ConfigError(ctx + ": ground truth for unknown rule '" + rule_id + "'");
  }
  const std::vector<MenidRule> copy(rules.begin(), rules.end());
  check_state_arity(copy, spec.initial_state, ctx + " initial_state");
  check_state_arity(copy, spec.goal, ctx + " goal");
}

ProbVector perturb_distribution(const ProbVector& p, double magnitude, Rng& rng) {
  if (!(magnitude >= 0.0 && magnitude <= 1.0)) {
    throw InvalidParameter("perturbation magnitude must lie in [0, 1]");
  }
  const std::vector<double> ones(p.size(), 1.0);
  const ProbVector u = sample_dirichlet(ones, rng);
  std::vector<double> mixed(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    mixed[i] = (1.0 - magnitude) * p[i] + magnitude * u[i];
  }
  return ProbVector::normalized(std::move(mixed));
}

void SimClock::advance(double seconds) {
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    throw InvalidParameter("clock can only advance by a positive duration");
  }
  now_ += seconds;
}

SimulatedEnvironment::SimulatedEnvironment(EnvironmentSpec spec, std::span<const MenidRule> rules)
    : spec_(std::move(spec)), rules_(rules.begin(), rules.end()), state_(spec_.initial_state) {
  check_environment_spec(spec_, rules_);
  std::optional<Rng> rng;
  if (spec_.perturbation) rng.emplace(spec_.perturbation->seed);
  for (const auto& [rule_id, p] : spec_.ground_truth) {
    effective_.emplace(rule_id, rng ? perturb_distribution(p, spec_.perturbation->magnitude, *rng)
                                    : p);
  }
}

const ProbVector& SimulatedEnvironment::distribution(const std::string& rule_id) const {
  auto it = effective_.find(rule_id);
  if (it == effective_.end()) throw ConfigError("unknown rule '" + rule_id + "'");
  return it->second;
}

double SimulatedEnvironment::latency(const GroundedAction& action) const {
  auto it = spec_.latency.find(action.name);
  if (it == spec_.latency.end()) {
    throw ConfigError("environment '" + spec_.env_id + "' has no latency for '" + action.name +
                      "'");
  }
  return it->second;
}

bool SimulatedEnvironment::is_goal(const State& state) const {
  return goal_reached(spec_.goal, state);
}

Experience SimulatedEnvironment::execute(const GroundedAction& action, Rng& rng) {
  auto match = triggering_rule(state_, rules_, action);
  if (!match) {
    throw NoRuleTriggers("no rule of " + action.str() + " triggers in {" + state_.serialize() +
                         "}");
  }
  const ProbVector& dist = distribution(match->rule->rule_id);
  const double u = uniform01(rng);
  std::size_t index = dist.size() - 1;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    cumulative += dist[i];
    if (u < cumulative) {
      index = i;
      break;
    }
  }
  // Guard against landing on a zero-probability tail through rounding.
  while (dist[index] == 0.0 && index > 0) --index;

  State next = state_;
  if (index > 0) {
    next = apply_outcome(state_, *match->rule, match->binding, index);
  } else if (spec_.noise_effect == NoiseEffect::scramble && !state_.empty()) {
    const auto victim = static_cast<std::size_t>(uniform01(rng) * state_.size());
    State::Set preds = state_.predicates();
    preds.erase(std::next(preds.begin(), static_cast<std::ptrdiff_t>(victim)));
    next = State(std::move(preds));
  }

  const double elapsed = latency(action);
  clock_.advance(elapsed);
  Experience exp{spec_.kind, state_, action, next, elapsed};
  state_ = std::move(next);
  last_outcome_ = index;
  return exp;
}

WallClockEnvironment::WallClockEnvironment(EnvKind kind, Hooks hooks, State goal,
                                           std::size_t max_steps)
    : kind_(kind), hooks_(std::move(hooks)), goal_(std::move(goal)), max_steps_(max_steps) {
  if (!hooks_.get_state || !hooks_.execute || !hooks_.reset || !hooks_.set_state) {
    throw ConfigError("wall-clock environment needs every hook");
  }
}

Experience WallClockEnvironment::execute(const GroundedAction& action, Rng&) {
  const State before = hooks_.get_state();
  const auto start = std::chrono::steady_clock::now();
  State after = hooks_.execute(action);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  const double elapsed = std::max(took.count(), 1e-9);
  clock_.advance(elapsed);
  auto& [total, n] = durations_[action.name];
  total += elapsed;
  ++n;
  return Experience{kind_, before, action, std::move(after), elapsed};
}

double WallClockEnvironment::latency(const GroundedAction& action) const {
  auto it = durations_.find(action.name);
  if (it == durations_.end()) return 0.0;
  return it->second.first / static_cast<double>(it->second.second);
}

bool WallClockEnvironment::is_goal(const State& state) const { return goal_reached(goal_, state); }

}  // namespace menid
