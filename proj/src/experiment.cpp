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

#include "menid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "menid/csv.hpp"
#include "menid/errors.hpp"
#include "menid/estimation.hpp"
#include "menid/planning.hpp"
#include "menid/rule_io.hpp"

namespace menid {

double jaccard_error(const State& a, const State& b) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t united = a.size() + b.size() - common;
  if (united == 0) return 0.0;
  return 1.0 - static_cast<double>(common) / static_cast<double>(united);
}

void Scenario::validate() const {
  check_rule_set(rules);
  if (target.kind != EnvKind::target) {
    throw ConfigError("environment '" + target.env_id + "' is not a target environment");
  }
  if (test.kind != EnvKind::test) {
    throw ConfigError("environment '" + test.env_id + "' is not a test environment");
  }
  check_environment_spec(target, rules);
  check_environment_spec(test, rules);
}

Scenario reference_scenario(double perturbation, std::uint64_t perturbation_seed) {
  const std::vector<OutcomeSpec> removal = {
      {"success", {"removed(?x)"}, {"in(?x,?b)"}, ""},
      {"failure", {}, {}, ""},
  };
  Scenario sc;
  sc.rules.push_back(make_rule("lever_pcb", "lever", {"?x"}, {"?b"}, {"pcb(?x)", "in(?x,?b)"},
                               removal));
  sc.rules.push_back(make_rule("shake_bay", "shake", {"?b"}, {"?x"}, {"bay(?b)", "in(?x,?b)"},
                               removal));
  sc.rules.push_back(make_rule("suck_pcb", "suck", {"?x"}, {"?b"}, {"pcb(?x)", "in(?x,?b)"},
                               removal));

  sc.target.env_id = "high_quality";
  sc.target.kind = EnvKind::target;
  sc.target.initial_state = State::parse("pcb(p1) in(p1,b1) bay(b1)");
  sc.target.goal = State::parse("removed(p1)");
  sc.target.ground_truth = {{"lever_pcb", ProbVector{0.0, 0.9, 0.1}},
                            {"shake_bay", ProbVector{0.0, 0.5, 0.5}},
                            {"suck_pcb", ProbVector{0.0, 0.1, 0.9}}};
  sc.target.latency = {{"lever", 20.0}, {"shake", 20.0}, {"suck", 20.0}};

  sc.test = sc.target;
  sc.test.env_id = "low_quality";
  sc.test.kind = EnvKind::test;
  sc.test.latency = {{"lever", 1.0}, {"shake", 1.0}, {"suck", 1.0}};
  sc.test.perturbation = Perturbation{perturbation, perturbation_seed};
  return sc;
}

std::string ConfigPoint::name() const {
  return "T" + format_real(test_time) + "_penalty" + format_real(penalty);
}

std::vector<ConfigPoint> ExperimentPlan::grid() const {
  std::vector<ConfigPoint> out;
  for (double t : test_times) {
    for (double p : penalties) out.push_back({t, p});
  }
  return out;
}

void ExperimentPlan::validate() const {
  scenario.validate();
  learner.validate();
  if (replications < 1) throw InvalidParameter("replications must be at least 1");
  if (grid_points < 2) throw InvalidParameter("grid_points must be at least 2");
  if (jobs < 1) throw InvalidParameter("jobs must be at least 1");
  if (test_times.empty() || penalties.empty()) throw InvalidParameter("empty config grid");
  for (double t : test_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("T values must be >= 0");
  }
  for (double p : penalties) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidParameter("penalty values must be non-negative");
    }
  }
}

std::string RewardCurve::to_csv() const {
  std::string out = csv_line({"time", "mean", "std"});
  for (std::size_t i = 0; i < time.size(); ++i) {
    out += csv_line({format_real(time[i]), format_real(mean[i]), format_real(stddev[i])});
  }
  return out;
}

std::vector<std::string> ExperimentResult::failures() const {
  std::vector<std::string> out;
  for (const auto& r : runs) {
    if (!r.log) {
      out.push_back(r.config.name() + " replication " + std::to_string(r.replication) + ": " +
                    r.error);
    }
  }
  return out;
}

const ReplicationResult& ExperimentResult::run(std::size_t config, std::size_t replication) const {
  const std::size_t per_config = configs.empty() ? 0 : runs.size() / configs.size();
  return runs.at(config * per_config + replication);
}

std::vector<double> time_grid(double budget, std::size_t points) {
  if (points < 2) throw InvalidParameter("a time grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = budget * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return grid;
}

double trace_value_at(std::span<const std::pair<double, double>> trace, double t) {
  double value = 0.0;
  for (const auto& [time, score] : trace) {
    if (time > t) break;
    value = score;
  }
  return value;
}

RewardCurve aggregate_traces(const std::vector<std::vector<std::pair<double, double>>>& traces,
                             const std::vector<double>& grid) {
  RewardCurve curve;
  curve.time = grid;
  curve.mean.assign(grid.size(), 0.0);
  curve.stddev.assign(grid.size(), 0.0);
  if (traces.empty()) return curve;
  const double r = static_cast<double>(traces.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double sum = 0.0;
    std::vector<double> values;
    values.reserve(traces.size());
    for (const auto& trace : traces) {
      values.push_back(trace_value_at(trace, grid[k]));
      sum += values.back();
    }
    const double mean = sum / r;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    curve.mean[k] = mean;
    curve.stddev[k] = std::sqrt(var / r);
  }
  return curve;
}

ExperimentResult run_replications(const ExperimentPlan& plan) {
  plan.validate();
  ExperimentResult result;
  result.configs = plan.grid();
  const std::size_t total = result.configs.size() * plan.replications;
  result.runs.resize(total);

  auto run_one = [&](std::size_t job) {
    const std::size_t c = job / plan.replications;
    const std::size_t r = job % plan.replications;
    ReplicationResult& out = result.runs[job];
    out.config = result.configs[c];
    out.replication = r;
    out.seed = plan.seed_base + r;
    try {
      LearnerConfig cfg = plan.learner;
      cfg.test_time = out.config.test_time;
      cfg.seed = out.seed;
      const RewardSpec reward =
          RewardSpec::from_rules(plan.scenario.rules, plan.success_reward, out.config.penalty,
                                 plan.scenario.target.goal);
      SimulatedEnvironment target(plan.scenario.target, plan.scenario.rules);
      SimulatedEnvironment test(plan.scenario.test, plan.scenario.rules);
      out.log = run_learner(cfg, target, test, plan.scenario.rules, reward);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  const std::size_t workers = std::min(plan.jobs, total);
  if (workers <= 1) {
    for (std::size_t j = 0; j < total; ++j) run_one(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < total; j = next++) run_one(j);
      });
    }
    for (auto& t : pool) t.join();
  }

  const auto grid = time_grid(plan.learner.total_budget, plan.grid_points);
  for (std::size_t c = 0; c < result.configs.size(); ++c) {
    std::vector<std::vector<std::pair<double, double>>> traces;
    for (std::size_t r = 0; r < plan.replications; ++r) {
      const auto& run = result.runs[c * plan.replications + r];
      if (run.log) traces.push_back(run.log->reward_trace);
    }
    result.curves.push_back(aggregate_traces(traces, grid));
  }
  return result;
}

namespace {

std::size_t sample_index(const ProbVector& p, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  std::size_t last = p.size() - 1;
  while (last > 0 && p[last] == 0.0) --last;
  return last;
}

double max_error(const ProbVector& p, const CountVector& counts) {
  const double n = static_cast<double>(counts.total());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p[i] - static_cast<double>(counts[i]) / n));
  }
  return worst;
}

void check_calibration_args(const std::vector<double>& epsilons, std::size_t replications) {
  if (epsilons.empty()) throw InvalidParameter("no epsilon values given");
  if (replications < 1) throw InvalidParameter("replications must be at least 1");
}

}  // namespace

CalibrationTable delta_calibration(const ProbVector& true_dist, std::size_t max_n,
                                   const std::vector<double>& epsilons, std::size_t sample_size,
                                   std::size_t replications, std::uint64_t seed) {
  if (max_n < 10) throw InvalidParameter("max_N must be at least 10");
  check_calibration_args(epsilons, replications);
  CalibrationTable table;
  table.epsilons = epsilons;
  table.rows.resize(max_n);
  for (std::size_t n = 0; n < max_n; ++n) {
    table.rows[n].n = n + 1;
    table.rows[n].mean_delta.assign(epsilons.size(), 0.0);
    table.rows[n].exceedance_rate.assign(epsilons.size(), 0.0);
  }
  for (std::size_t r = 0; r < replications; ++r) {
    Rng draws = make_stream(seed, "calibration-draws-" + std::to_string(r));
    Rng posterior = make_stream(seed, "calibration-delta-" + std::to_string(r));
    CountVector counts(true_dist.size());
    for (std::size_t n = 0; n < max_n; ++n) {
      counts.increment(sample_index(true_dist, draws));
      const double err = max_error(true_dist, counts);
      const auto deltas = delta_bounds(counts, epsilons, sample_size, posterior);
      CalibrationRow& row = table.rows[n];
      row.actual_error += err;
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        row.mean_delta[e] += deltas[e];
        row.exceedance_rate[e] += err > deltas[e] ? 1.0 : 0.0;
      }
    }
  }
  const double rr = static_cast<double>(replications);
  for (auto& row : table.rows) {
    row.actual_error /= rr;
    for (auto& d : row.mean_delta) d /= rr;
    for (auto& x : row.exceedance_rate) x /= rr;
  }
  return table;
}

std::vector<double> delta_exceedance(const ProbVector& true_dist, std::size_t n,
                                     const std::vector<double>& epsilons,
                                     std::size_t sample_size, std::size_t replications,
                                     std::uint64_t seed) {
  if (n < 1) throw InvalidParameter("sample size must be at least 1");
  check_calibration_args(epsilons, replications);
  std::vector<double> rate(epsilons.size(), 0.0);
  for (std::size_t r = 0; r < replications; ++r) {
    Rng draws = make_stream(seed, "exceedance-draws-" + std::to_string(r));
    Rng posterior = make_stream(seed, "exceedance-delta-" + std::to_string(r));
    CountVector counts(true_dist.size());
    for (std::size_t i = 0; i < n; ++i) counts.increment(sample_index(true_dist, draws));
    const double err = max_error(true_dist, counts);
    const auto deltas = delta_bounds(counts, epsilons, sample_size, posterior);
    for (std::size_t e = 0; e < epsilons.size(); ++e) rate[e] += err > deltas[e] ? 1.0 : 0.0;
  }
  for (auto& x : rate) x /= static_cast<double>(replications);
  return rate;
}

std::string CalibrationTable::to_csv() const {
  std::vector<std::string> header{"N", "actual_error"};
  for (double e : epsilons) header.push_back("delta_eps_" + format_real(e));
  for (double e : epsilons) header.push_back("exceed_eps_" + format_real(e));
  std::string out = csv_line(header);
  for (const auto& row : rows) {
    std::vector<std::string> fields{std::to_string(row.n), format_real(row.actual_error)};
    for (double d : row.mean_delta) fields.push_back(format_real(d));
    for (double x : row.exceedance_rate) fields.push_back(format_real(x));
    out += csv_line(fields);
  }
  return out;
}

std::vector<DivergenceRow> symbolic_divergence_report(Environment& env_a, Rng& rng_a,
                                                      Environment& env_b, Rng& rng_b,
                                                      std::span<const GroundedAction> actions,
                                                      std::size_t repetitions) {
  std::vector<DivergenceRow> rows;
  if (repetitions == 0) return rows;
  for (const auto& action : actions) {
    double total = 0.0;
    for (std::size_t k = 0; k < repetitions; ++k) {
      env_a.reset();
      env_b.reset();
      const Experience ea = env_a.execute(action, rng_a);
      const Experience eb = env_b.execute(action, rng_b);
      total += jaccard_error(ea.s_next, eb.s_next);
    }
    rows.push_back({action, repetitions, total / static_cast<double>(repetitions)});
  }
  env_a.reset();
  env_b.reset();
  return rows;
}

std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
  std::string out = csv_line({"action", "repetitions", "mean_error"});
  for (const auto& r : rows) {
    out += csv_line({r.action.str(), std::to_string(r.repetitions), format_real(r.mean_error)});
  }
  return out;
}

}  // namespace menid
