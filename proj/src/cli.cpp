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

#include "menid/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <random>

#include "menid/config.hpp"
#include "menid/csv.hpp"
#include "menid/errors.hpp"
#include "menid/experiment.hpp"
#include "menid/rule_engine.hpp"
#include "menid/rule_io.hpp"

namespace menid::cli {
namespace {

constexpr double kDistTolerance = 1e-6;

struct LearnOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

struct ExperimentOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::size_t jobs = 1;
};

struct CalibrateOptions {
  std::vector<double> dist;
  std::size_t max_n = 400;
  std::vector<double> epsilons{0.01, 0.1};
  std::size_t samples = 10'000;
  std::size_t replications = 10;
  std::uint64_t seed = 0;
  std::string out = "calibration.csv";
};

struct ValidateOptions {
  std::string config;
  std::string rules;
  std::vector<std::string> envs;
};

int cmd_learn(const LearnOptions& opt, std::ostream& out, bool verbose, std::ostream& err) {
  const RunConfig cfg = load_run_config(opt.config, opt.overrides);
  const Scenario sc = load_scenario(cfg);
  const RewardSpec reward =
      RewardSpec::from_rules(sc.rules, cfg.success_reward, cfg.penalty, sc.target.goal);
  SimulatedEnvironment target(sc.target, sc.rules);
  SimulatedEnvironment test(sc.test, sc.rules);
  const ExperienceLog log = run_learner(cfg.learner, target, test, sc.rules, reward);

  const std::filesystem::path path =
      opt.out.empty() ? cfg.output_dir / "experiences.csv" : std::filesystem::path(opt.out);
  write_text_file(path, log.to_csv());
  if (verbose) {
    err << "target executions: " << log.count(EnvKind::target)
        << ", test executions: " << log.count(EnvKind::test) << "\n";
  }
  out << "final score: " << format_real(log.score()) << "\n";
  out << "experiences: " << path.string() << "\n";
  return kExitOk;
}

int cmd_experiment(const ExperimentOptions& opt, std::ostream& out, bool verbose,
                   std::ostream& err) {
  const RunConfig cfg = load_run_config(opt.config, opt.overrides);
  if (opt.jobs < 1) throw ConfigError("--jobs must be at least 1");
  const ExperimentPlan plan = make_plan(cfg, load_scenario(cfg), opt.jobs);
  const ExperimentResult result = run_replications(plan);

  const auto& dir = cfg.output_dir;
  for (std::size_t c = 0; c < result.configs.size(); ++c) {
    const std::string name = result.configs[c].name();
    write_text_file(dir / ("reward_curve_" + name + ".csv"), result.curves[c].to_csv());
    for (std::size_t r = 0; r < plan.replications; ++r) {
      const auto& run = result.run(c, r);
      if (run.log) {
        write_text_file(dir / ("experiences_" + name + "_" + std::to_string(r) + ".csv"),
                        run.log->to_csv());
      }
    }
    const auto& curve = result.curves[c];
    out << name << ": final mean " << format_real(curve.mean.back()) << " (std "
        << format_real(curve.stddev.back()) << ")\n";
  }

  SimulatedEnvironment target(plan.scenario.target, plan.scenario.rules);
  SimulatedEnvironment test(plan.scenario.test, plan.scenario.rules);
  Rng rng_target = make_stream(plan.seed_base, "divergence-target");
  Rng rng_test = make_stream(plan.seed_base, "divergence-test");
  const auto actions = enumerate_actions(plan.scenario.rules, plan.scenario.target.initial_state);
  const auto rows = symbolic_divergence_report(target, rng_target, test, rng_test, actions,
                                               cfg.divergence_repetitions);
  write_text_file(dir / "divergence.csv", divergence_csv(rows));

  const auto failures = result.failures();
  if (!failures.empty()) {
    std::string text;
    for (const auto& f : failures) {
      err << "replication failed: " << f << "\n";
      text += f + "\n";
    }
    write_text_file(dir / "failures.txt", text);
    return kExitRuntime;
  }
  if (verbose) err << "wrote results to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out) {
  if (opt.dist.size() < 2) throw ConfigError("--dist needs at least two probabilities");
  double sum = 0.0;
  for (double p : opt.dist) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("--dist entries must lie in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistTolerance) {
    throw ConfigError("--dist must sum to 1 (got " + format_real(sum) + ")");
  }
  const ProbVector dist = ProbVector::normalized(opt.dist);
  const CalibrationTable table =
      delta_calibration(dist, opt.max_n, opt.epsilons, opt.samples, opt.replications, opt.seed);
  write_text_file(opt.out, table.to_csv());
  out << "calibration: " << opt.out << " (" << table.rows.size() << " rows)\n";
  return kExitOk;
}

int cmd_validate(const ValidateOptions& opt, std::ostream& out) {
  std::vector<std::string> warnings;
  if (!opt.config.empty()) {
    const RunConfig cfg = load_run_config(opt.config, {});
    warnings = load_rule_set(cfg.rules_path).warnings;
    load_scenario(cfg);
  } else {
    if (opt.rules.empty()) throw ConfigError("validate needs --config or --rules");
    RuleSet set = load_rule_set(opt.rules);
    warnings = set.warnings;
    for (const auto& path : opt.envs) {
      check_environment_spec(load_environment_spec(path), set.rules);
    }
  }
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  out << "ok\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn symbolic action outcome distributions from a test and a target environment",
               "menid"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Progress diagnostics on stderr");

  LearnOptions learn;
  auto* learn_cmd = app.add_subcommand("learn", "Run the learning loop once");
  learn_cmd->add_option("-c,--config", learn.config, "Run config (JSON)")->required();
  learn_cmd->add_option("--set", learn.overrides, "Override a config key: key=value");
  learn_cmd->add_option("-o,--out", learn.out,
                        "Experience CSV path (default <output_dir>/experiences.csv)");

  ExperimentOptions experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "Replicated sweep over T and penalty");
  exp_cmd->add_option("-c,--config", experiment.config, "Run config (JSON)")->required();
  exp_cmd->add_option("--set", experiment.overrides, "Override a config key: key=value");
  exp_cmd->add_option("-j,--jobs", experiment.jobs, "Parallel replications")->capture_default_str();

  CalibrateOptions calibrate;
  auto* cal_cmd = app.add_subcommand("calibrate", "Delta-bound calibration table");
  cal_cmd->add_option("--dist", calibrate.dist, "True distribution, comma separated")
      ->required()
      ->delimiter(',');
  cal_cmd->add_option("--max-n", calibrate.max_n, "Largest sample size")->capture_default_str();
  cal_cmd->add_option("--eps", calibrate.epsilons, "Epsilon values, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  cal_cmd->add_option("-S,--samples", calibrate.samples, "Posterior draws per bound")
      ->capture_default_str();
  cal_cmd->add_option("-R,--replications", calibrate.replications, "Observation streams")
      ->capture_default_str();
  cal_cmd->add_option("--seed", calibrate.seed, "Root seed")->capture_default_str();
  cal_cmd->add_option("-o,--out", calibrate.out, "Output CSV")->capture_default_str();

  ValidateOptions validate;
  auto* val_cmd = app.add_subcommand("validate", "Lint rule and environment files");
  val_cmd->add_option("-c,--config", validate.config, "Run config (JSON)");
  val_cmd->add_option("--rules", validate.rules, "Rule-set file");
  val_cmd->add_option("--env", validate.envs, "Environment file (repeatable)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("menid");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    return kExitConfig;
  }

  try {
    if (*learn_cmd) return cmd_learn(learn, out, verbose, err);
    if (*exp_cmd) return cmd_experiment(experiment, out, verbose, err);
    if (*cal_cmd) return cmd_calibrate(calibrate, out);
    if (*val_cmd) return cmd_validate(validate, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace menid::cli
