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


// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails. argv[1] is the path of the menid executable.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "menid/estimation.hpp"
#include "menid/experiment.hpp"
#include "menid/rule_engine.hpp"

namespace fs = std::filesystem;
using namespace menid;

namespace {

// Tolerances and limits.
constexpr double kExceedLimit10 = 0.13;     // eps = 0.1
constexpr double kExceedLimit01 = 0.025;    // eps = 0.01
constexpr double kFusionTolerance = 1e-12;
constexpr double kLimitTolerance = 1e-3;
constexpr double kPooledTolerance = 0.01;
constexpr double kSlopeTolerance = 1.0;      // executions per latency period
constexpr double kValueTolerance = 1e-9;
constexpr double kRuntime1 = 60.0, kRuntime2 = 1.0, kRuntime3 = 30.0, kRuntime4 = 300.0,
                 kRuntime6 = 30.0, kRuntime7 = 30.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& body,
            double runtime_limit = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Verdict o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (runtime_limit > 0.0 && secs > runtime_limit) {
    o.pass = false;
    o.detail += "; runtime over " + fmt("%.0f", runtime_limit) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s | %s | %.2f s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

Verdict delta_calibration_criterion() {
  const std::vector<double> eps{0.1, 0.01};
  Verdict o{true, ""};
  for (const ProbVector& p : {ProbVector{0.5, 0.5}, ProbVector::uniform(3)}) {
    const auto rate = delta_exceedance(p, 100, eps, 10000, 1000, 2020 + p.size());
    o.pass = o.pass && rate[0] <= kExceedLimit10 && rate[1] <= kExceedLimit01;
    o.detail += "k=" + std::to_string(p.size()) + ": exceed(0.1)=" + fmt("%.3f", rate[0]) +
                " exceed(0.01)=" + fmt("%.3f", rate[1]) + "; ";
  }
  o.detail += "limits 0.13 / 0.025";
  return o;
}

Verdict fusion_criterion() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big w = Big(10) / boost::multiprecision::sqrt(Big(11));
  const Big o0 = (8 + w * 5) / (10 + w * 10);
  const Big o1 = (2 + w * 5) / (10 + w * 10);
  const ProbVector p = m_estimate({8, 2}, {5, 5}, 10.0);
  const double err = std::max(std::abs(p[0] - o0.convert_to<double>()),
                              std::abs(p[1] - o1.convert_to<double>()));
  bool reduction = true;
  for (double m : {0.5, 1.0, 10.0, 100.0}) {
    reduction = reduction && m_estimate({0, 0}, {5, 5}, m) == ProbVector{0.5, 0.5} &&
                m_estimate({0, 0}, {7, 3}, m) == empirical_estimate({7, 3});
  }
  const ProbVector lim = m_estimate({8000000, 2000000}, {5, 5}, 10.0);
  const double lim_err = std::max(std::abs(lim[0] - 0.8), std::abs(lim[1] - 0.2));
  return {err <= kFusionTolerance && reduction && lim_err <= kLimitTolerance,
          "|error|=" + fmt("%.2e", err) + " (tol 1e-12), N1=0 reduction " +
              (reduction ? "holds" : "fails") + ", limit error " + fmt("%.2e", lim_err)};
}

std::vector<double> mean_pooled(const ProbVector& p1, const ProbVector& p2, std::size_t n,
                                std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  auto draw = [&](const ProbVector& p) {
    CountVector c(p.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double u = uniform01(rng);
      std::size_t k = 0;
      double acc = p[0];
      while (u >= acc && k + 1 < p.size()) acc += p[++k];
      c.increment(k);
    }
    return c;
  };
  std::vector<double> mean(p1.size(), 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const CountVector a = draw(p1), b = draw(p2);
    const ProbVector q = pooled_estimate(a, b);
    for (std::size_t i = 0; i < q.size(); ++i) mean[i] += q[i] / static_cast<double>(trials);
  }
  return mean;
}

Verdict pooling_criterion() {
  const ProbVector p{0.5, 0.3, 0.2};
  const auto same = mean_pooled(p, p, 20, 10000, 3);
  double e1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) e1 = std::max(e1, std::abs(same[i] - p[i]));
  const auto mixed = mean_pooled({0.8, 0.2}, {0.4, 0.6}, 20, 10000, 4);
  const double e2 = std::max(std::abs(mixed[0] - 0.6), std::abs(mixed[1] - 0.4));
  return {e1 < kPooledTolerance && e2 < kPooledTolerance,
          "equal p: max error " + fmt("%.6f", e1) + "; mixture [0.6,0.4]: max error " +
              fmt("%.6f", e2) + " (tol 0.01)"};
}

struct TrendRuns {
  ExperimentResult result;
  std::size_t index(double t, double penalty) const {
    for (std::size_t c = 0; c < result.configs.size(); ++c) {
      if (result.configs[c].test_time == t && result.configs[c].penalty == penalty) return c;
    }
    throw std::runtime_error("missing config");
  }
  double mean_final(double t, double penalty, std::size_t reps) const {
    double s = 0.0;
    for (std::size_t r = 0; r < reps; ++r) s += result.run(index(t, penalty), r).log->score();
    return s / static_cast<double>(reps);
  }
};

constexpr std::size_t kTrendReps = 20;

TrendRuns run_trend() {
  ExperimentPlan plan;
  plan.scenario = reference_scenario(0.15, 2020);
  plan.learner.total_budget = 3600.0;
  plan.test_times = {0.0, 20.0};
  plan.penalties = {0.0, 10.0};
  plan.replications = kTrendReps;
  plan.seed_base = 5000;
  return {run_replications(plan)};
}

Verdict trend_criterion(const TrendRuns& runs) {
  if (!runs.result.failures().empty()) return {false, runs.result.failures().front()};
  const double t20p10 = runs.mean_final(20, 10, kTrendReps);
  const double t0p10 = runs.mean_final(0, 10, kTrendReps);
  const double t20p0 = runs.mean_final(20, 0, kTrendReps);
  const double t0p0 = runs.mean_final(0, 0, kTrendReps);
  return {t20p10 > t0p10 && t0p0 >= t20p0,
          "penalty 10: T20 " + fmt("%.2f", t20p10) + " vs T0 " + fmt("%.2f", t0p10) +
              "; penalty 0: T0 " + fmt("%.2f", t0p0) + " vs T20 " + fmt("%.2f", t20p0)};
}

Verdict end_slope_criterion(const TrendRuns& runs) {
  const double latency = reference_scenario().target.latency.at("lever");
  const double budget = 3600.0;
  double tail_execs = 0.0, tail_time = 0.0, base_execs = 0.0;
  bool gaps_exact = true;
  double mean_tail_start = 0.0;
  std::size_t with_tests = 0;
  for (double penalty : {0.0, 10.0}) {
    for (std::size_t r = 0; r < kTrendReps; ++r) {
      base_execs += static_cast<double>(
          runs.result.run(runs.index(0, penalty), r).log->count(EnvKind::target));
      const ExperienceLog& log = *runs.result.run(runs.index(20, penalty), r).log;
      std::size_t last_test = log.entries.size();
      for (std::size_t i = 0; i < log.entries.size(); ++i) {
        if (log.entries[i].experience.env_label == EnvKind::test) last_test = i;
      }
      if (last_test == log.entries.size()) continue;
      ++with_tests;
      const double start = log.entries[last_test].sim_time;
      mean_tail_start += start;
      tail_time += budget - start;
      for (std::size_t i = last_test + 1; i < log.entries.size(); ++i) {
        tail_execs += 1.0;
        const double prev = i == last_test + 1 ? start : log.entries[i - 1].sim_time;
        gaps_exact = gaps_exact && std::abs(log.entries[i].sim_time - prev - latency) < 1e-9;
      }
    }
  }
  if (with_tests == 0 || tail_time <= 0.0) return {false, "no T=20 run tested at all"};
  const double tail_rate = tail_execs * latency / tail_time;
  const double base_rate = base_execs * latency / (budget * 2.0 * kTrendReps);
  mean_tail_start /= static_cast<double>(with_tests);
  return {std::abs(tail_rate - base_rate) <= kSlopeTolerance && gaps_exact,
          "executions per latency period after the last test " + fmt("%.3f", tail_rate) +
              " vs baseline " + fmt("%.3f", base_rate) + " (tol 1); tail starts at " +
              fmt("%.0f", mean_tail_start) + " s on average; inter-execution gaps " +
              (gaps_exact ? "all equal the latency" : "irregular")};
}

Verdict value_iteration_criterion() {
  testing::Gen g(6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_planning_instance(g, 20, 4, 3);
    const auto d = value_iteration(inst.model, inst.reward, inst.horizon, inst.discount);
    for (const auto& [s, dec] : d) {
      worst = std::max(worst, std::abs(dec.value - testing::expectimax(inst, s, inst.horizon)));
    }
  }
  return {worst <= kValueTolerance, "max |V - expectimax| = " + fmt("%.2e", worst) +
                                        " over 100 instances (tol 1e-9)"};
}

Verdict properties_criterion() {
  testing::Gen g(7);
  std::size_t roundtrip_bad = 0, jaccard_bad = 0, pairs = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto rc = testing::random_rule_case(g);
    const Binding b = *ground_rule(rc.rule, rc.state, rc.action);
    for (const auto& p : rc.rule.precondition) roundtrip_bad += !rc.state.contains(substitute(p, b));
    std::vector<State> next;
    for (std::size_t j = 1; j < rc.rule.outcome_count(); ++j) {
      next.push_back(apply_outcome(rc.state, rc.rule, b, j));
    }
    for (std::size_t j = 0; j < next.size(); ++j) {
      std::size_t expected = j + 1;
      for (std::size_t k = 0; k < j; ++k) {
        if (next[k] == next[j]) {
          expected = k + 1;
          break;
        }
      }
      ++pairs;
      roundtrip_bad += classify_outcome(rc.rule, b, rc.state, next[j]) != expected;
    }
  }
  for (int i = 0; i < 10000; ++i) {
    const State a = testing::random_state(g), c = testing::random_state(g);
    const double e = jaccard_error(a, c);
    jaccard_bad += !(e >= 0.0 && e <= 1.0) || e != jaccard_error(c, a) || (e == 0.0) != (a == c) ||
                   jaccard_error(a, a) != 0.0;
  }
  return {roundtrip_bad == 0 && jaccard_bad == 0,
          std::to_string(roundtrip_bad) + " roundtrip violations over 10000 rules (" +
              std::to_string(pairs) + " outcomes), " + std::to_string(jaccard_bad) +
              " Jaccard violations over 10000 pairs"};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

Verdict determinism_criterion(const std::string& menid) {
  const fs::path root = fs::temp_directory_path() / "menid_acceptance_determinism";
  fs::remove_all(root);
  const std::string config = MENID_DATA_DIR "/demo.json";
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    const std::string learn = "\"" + menid + "\" learn -c \"" + config + "\" -o \"" +
                              (dir / "learn" / "experiences.csv").string() + "\" > /dev/null";
    const std::string experiment = "\"" + menid + "\" experiment -c \"" + config +
                                   "\" --set output_dir=\"" + (dir / "experiment").string() +
                                   "\" > /dev/null";
    if (std::system(learn.c_str()) != 0) return {false, "learn failed"};
    if (std::system(experiment.c_str()) != 0) return {false, "experiment failed"};
  }
  const auto a = read_tree(root / "a"), b = read_tree(root / "b");
  const bool same = !a.empty() && a == b;
  return {same, std::to_string(a.size()) + " files compared, " +
                    (same ? "all byte-identical" : "differences found")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string menid = argc > 1 ? argv[1] : "menid";

  report(1, "delta-bound calibration", delta_calibration_criterion, kRuntime1);
  report(2, "estimator fusion exactness", fusion_criterion, kRuntime2);
  report(3, "pooled estimate Monte Carlo", pooling_criterion, kRuntime3);

  const auto start = std::chrono::steady_clock::now();
  const TrendRuns runs = run_trend();
  const double trend_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(4, "test-time benefit ordering on the reference scenario", [&] {
    Verdict o = trend_criterion(runs);
    o.detail += "; 80 runs took " + fmt("%.1f", trend_secs) + " s";
    if (trend_secs > kRuntime4) o.pass = false;
    return o;
  });
  report(5, "end slope after testing stops", [&] { return end_slope_criterion(runs); });

  report(6, "value iteration vs expectimax", value_iteration_criterion, kRuntime6);
  report(7, "rule-engine roundtrip and Jaccard properties", properties_criterion, kRuntime7);
  report(8, "byte-identical learn and experiment outputs",
         [&] { return determinism_criterion(menid); });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
