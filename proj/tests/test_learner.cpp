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


#include <doctest.h>

#include <cmath>
#include <map>

#include "menid/errors.hpp"
#include "menid/estimation.hpp"
#include "menid/experiment.hpp"
#include "menid/learner.hpp"
#include "menid/rule_engine.hpp"

using namespace menid;

namespace {

const GroundedAction kLever{"lever", {"p1"}};

struct Rig {
  Scenario sc = reference_scenario();
  RewardSpec reward;

  explicit Rig(double penalty = 0.0, double target_latency = 20.0, double test_latency = 1.0) {
    for (auto& [a, l] : sc.target.latency) l = target_latency;
    for (auto& [a, l] : sc.test.latency) l = test_latency;
    reward = RewardSpec::from_rules(sc.rules, 1.0, penalty, sc.target.goal);
  }

  SimulatedEnvironment target() const { return SimulatedEnvironment(sc.target, sc.rules); }
  SimulatedEnvironment test() const { return SimulatedEnvironment(sc.test, sc.rules); }
  Learner learner(const LearnerConfig& cfg) const { return Learner(cfg, sc.rules, reward); }
};

LearnerConfig config(double t, std::uint64_t seed = 1) {
  LearnerConfig cfg;
  cfg.test_time = t;
  cfg.seed = seed;
  return cfg;
}

// Contiguous runs of test-labeled entries.
struct TestBlock {
  GroundedAction action;
  std::size_t first = 0;
  std::size_t size = 0;
};

std::vector<TestBlock> test_blocks(const ExperienceLog& log) {
  std::vector<TestBlock> blocks;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    const auto& e = log.entries[i].experience;
    if (e.env_label != EnvKind::test) continue;
    if (!blocks.empty() && blocks.back().first + blocks.back().size == i &&
        blocks.back().action == e.action) {
      ++blocks.back().size;
    } else {
      blocks.push_back({e.action, i, 1});
    }
  }
  return blocks;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(LearnerConfig{}.validate());
  auto bad = [](auto edit) {
    LearnerConfig c;
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](auto& c) { c.test_time = -1; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(bad([](auto& c) { c.delta_threshold = 0; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(bad([](auto& c) { c.delta_threshold = 1; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(bad([](auto& c) { c.total_budget = 0; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(bad([](auto& c) { c.m = 0; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(bad([](auto& c) { c.delta_samples = 10; }).validate(), InvalidParameter);
  CHECK(parse_solver("value_iteration") == Solver::value_iteration);
  CHECK_THROWS_AS(parse_solver("greedy"), InvalidParameter);
}

TEST_CASE("should_test") {
  Rig rig;
  Learner learner = rig.learner(config(20));
  MenidRule rule = rig.sc.rules[0];
  CHECK(learner.should_test(rule, kLever));

  rule.counts_for(EnvKind::test) = CountVector{0, 1000000, 1000000};
  CHECK_FALSE(learner.should_test(rule, kLever));

  auto test = rig.test();
  learner.test_phase(test, rig.sc.target.initial_state, kLever);
  CHECK(learner.marks().is_marked(kLever));
  CHECK_FALSE(learner.should_test(rig.sc.rules[0], kLever));
}

TEST_CASE("test phase length follows the time allotment") {
  SUBCASE("T = 20, latency 2") {
    Rig rig(0.0, 20.0, 2.0);
    Learner learner = rig.learner(config(20));
    auto test = rig.test();
    CHECK(learner.test_phase(test, rig.sc.target.initial_state, kLever));
    CHECK(learner.log().entries.size() == 10);
    CHECK(learner.log().test_phases == std::vector<double>{20.0});
  }
  SUBCASE("T = 5, latency 2") {
    Rig rig(0.0, 20.0, 2.0);
    Learner learner = rig.learner(config(5));
    auto test = rig.test();
    learner.test_phase(test, rig.sc.target.initial_state, kLever);
    CHECK(learner.log().entries.size() == 3);
    CHECK(learner.now() == 6.0);
  }
  SUBCASE("T = 0") {
    Rig rig;
    Learner learner = rig.learner(config(0));
    auto test = rig.test();
    learner.test_phase(test, rig.sc.target.initial_state, kLever);
    CHECK(learner.log().entries.empty());
    CHECK_FALSE(learner.marks().is_marked(kLever));
  }
}

TEST_CASE("test executions start from the mirrored state") {
  Rig rig;
  Learner learner = rig.learner(config(20));
  auto test = rig.test();
  const State mirrored = State::parse("pcb(p1) in(p1,b2) bay(b2)");
  learner.test_phase(test, mirrored, kLever);
  for (const auto& e : learner.log().entries) {
    CHECK(e.experience.s == mirrored);
    CHECK(e.experience.env_label == EnvKind::test);
    CHECK(e.reward == 0.0);
  }
}

TEST_CASE("execute phase unmarks and accrues reward") {
  Rig rig(10.0);
  rig.sc.target.ground_truth["lever_pcb"] = ProbVector{0.0, 1.0, 0.0};
  rig.sc.target.ground_truth["suck_pcb"] = ProbVector{0.0, 0.0, 1.0};
  Learner learner = rig.learner(config(20));
  auto test = rig.test();
  auto target = rig.target();
  learner.test_phase(test, target.current_state(), kLever);
  REQUIRE(learner.marks().is_marked(kLever));
  CHECK(learner.execute_phase(target, kLever));
  CHECK_FALSE(learner.marks().is_marked(kLever));
  CHECK(learner.log().entries.back().reward == 1.0);
  CHECK(learner.log().score() == 1.0);

  target.reset();
  learner.execute_phase(target, {"suck", {"p1"}});
  CHECK(learner.log().entries.back().reward == -10.0);
  CHECK(learner.log().score() == -9.0);
  CHECK(learner.log().reward_trace.size() == 3);
}

TEST_CASE("execute phase refuses to overrun the budget") {
  Rig rig;
  LearnerConfig cfg = config(0);
  cfg.total_budget = 30.0;
  Learner learner = rig.learner(cfg);
  auto target = rig.target();
  CHECK(learner.execute_phase(target, kLever));
  target.reset();
  CHECK_FALSE(learner.execute_phase(target, kLever));
  CHECK(learner.log().entries.size() == 1);
}

TEST_CASE("update_rules counts and re-estimates") {
  Rig rig;
  Learner learner = rig.learner(config(20));
  const State s = rig.sc.target.initial_state;
  const State success = State::parse("pcb(p1) removed(p1) bay(b1)");
  const Experience test_success{EnvKind::test, s, kLever, success, 1.0};
  learner.update_rules(std::vector<Experience>{test_success});
  const MenidRule& lever = learner.rules()[0];
  CHECK(lever.counts_for(EnvKind::test) == CountVector{0, 1, 0});
  CHECK(*lever.probs[env_index(EnvKind::test)] == ProbVector{0.0, 1.0, 0.0});

  std::vector<Experience> batch;
  for (int i = 0; i < 4; ++i) batch.push_back(test_success);
  for (int i = 0; i < 5; ++i) batch.push_back({EnvKind::test, s, kLever, s, 1.0});
  learner.update_rules(batch);
  CHECK(lever.counts_for(EnvKind::test) == CountVector{0, 5, 5});
  CHECK((*lever.probs[env_index(EnvKind::target)])[1] == doctest::Approx(0.5));

  batch.clear();
  for (int i = 0; i < 8; ++i) batch.push_back({EnvKind::target, s, kLever, success, 20.0});
  for (int i = 0; i < 2; ++i) batch.push_back({EnvKind::target, s, kLever, s, 20.0});
  batch.push_back({EnvKind::target, s, kLever, State::parse("exploded(p1)"), 20.0});
  learner.update_rules(batch);
  CHECK(lever.counts_for(EnvKind::target) == CountVector{1, 8, 2});
  const ProbVector fused = *lever.probs[env_index(EnvKind::target)];
  CHECK(fused == m_estimate({1, 8, 2}, {0, 5, 5}, 10.0));
}

TEST_CASE("fused estimate with target counts [8,2] and test counts [5,5]") {
  Rig rig;
  Learner learner = rig.learner(config(20));
  const State s = rig.sc.target.initial_state;
  const State success = State::parse("pcb(p1) removed(p1) bay(b1)");
  std::vector<Experience> batch;
  for (int i = 0; i < 5; ++i) batch.push_back({EnvKind::test, s, kLever, success, 1.0});
  for (int i = 0; i < 5; ++i) batch.push_back({EnvKind::test, s, kLever, s, 1.0});
  for (int i = 0; i < 8; ++i) batch.push_back({EnvKind::target, s, kLever, success, 20.0});
  for (int i = 0; i < 2; ++i) batch.push_back({EnvKind::target, s, kLever, s, 20.0});
  learner.update_rules(batch);
  CHECK((*learner.rules()[0].probs[env_index(EnvKind::target)])[1] ==
        doctest::Approx(0.5747176895625416).epsilon(1e-12));
}

TEST_CASE("baseline runs execute floor(B / L) target actions") {
  for (double budget : {3600.0, 1000.0, 59.0}) {
    Rig rig;
    LearnerConfig cfg = config(0, 3);
    cfg.total_budget = budget;
    auto target = rig.target();
    auto test = rig.test();
    const ExperienceLog log = run_learner(cfg, target, test, rig.sc.rules, rig.reward);
    CHECK(log.count(EnvKind::target) == static_cast<std::size_t>(std::floor(budget / 20.0)));
    CHECK(log.count(EnvKind::test) == 0);
  }
}

TEST_CASE("loop invariants hold across seeds and settings") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (double penalty : {0.0, 10.0}) {
      for (double t : {5.0, 20.0}) {
        Rig rig(penalty, 20.0, 1.5);
        LearnerConfig cfg = config(t, seed);
        cfg.delta_samples = 1000;
        if (seed % 2 == 0) cfg.solver = Solver::value_iteration;
        auto target = rig.target();
        auto test = rig.test();
        Learner learner = rig.learner(cfg);
        const ExperienceLog log = learner.run(target, test);
        CAPTURE(seed);
        CAPTURE(penalty);
        CAPTURE(t);

        // Count conservation.
        for (EnvKind kind : {EnvKind::target, EnvKind::test}) {
          std::uint64_t total = 0;
          for (const auto& r : learner.rules()) total += r.counts_for(kind).total();
          CHECK(total == log.count(kind));
        }

        // Budget respect, per phase and overall.
        for (double charged : log.test_phases) {
          CHECK(charged >= t);
          CHECK(charged < t + 1.5);
        }
        CHECK(learner.now() <= cfg.total_budget);
        CHECK(learner.now() + 1.5 > cfg.total_budget - 20.0);

        // Mark alternation: each test block is one phase, and two phases of
        // the same action are separated by a target execution of it.
        const auto blocks = test_blocks(log);
        const std::size_t complete = log.test_phases.size();
        CHECK((blocks.size() == complete || blocks.size() == complete + 1));
        std::map<GroundedAction, std::size_t> last_block_end;
        for (const auto& b : blocks) {
          auto it = last_block_end.find(b.action);
          if (it != last_block_end.end()) {
            bool executed = false;
            for (std::size_t i = it->second; i < b.first; ++i) {
              const auto& e = log.entries[i].experience;
              executed |= e.env_label == EnvKind::target && e.action == b.action;
            }
            CHECK(executed);
          }
          last_block_end[b.action] = b.first + b.size;
        }

        // Rewards come only from target executions; without a penalty the
        // trace never decreases.
        for (const auto& e : log.entries) {
          if (e.experience.env_label == EnvKind::test) CHECK(e.reward == 0.0);
        }
        for (std::size_t i = 1; i < log.reward_trace.size(); ++i) {
          CHECK(log.reward_trace[i].first >= log.reward_trace[i - 1].first);
          if (penalty == 0.0) CHECK(log.reward_trace[i].second >= log.reward_trace[i - 1].second);
        }
      }
    }
  }
}

TEST_CASE("once testing stops only target executions remain at the baseline rate") {
  Rig rig(10.0);
  LearnerConfig cfg = config(20, 5);
  cfg.delta_threshold = 0.1;
  auto target = rig.target();
  auto test = rig.test();
  Learner learner = rig.learner(cfg);
  const ExperienceLog log = learner.run(target, test);
  std::size_t last_test = 0;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    if (log.entries[i].experience.env_label == EnvKind::test) last_test = i;
  }
  REQUIRE(last_test > 0);
  CHECK(log.entries[last_test].sim_time < 0.5 * cfg.total_budget);
  std::size_t tail = 0;
  for (std::size_t i = last_test + 1; i + 1 < log.entries.size(); ++i) {
    CHECK(log.entries[i].experience.env_label == EnvKind::target);
    CHECK(log.entries[i + 1].sim_time - log.entries[i].sim_time == doctest::Approx(20.0));
    ++tail;
  }
  CHECK(tail > 50);
  // Every rule still executed after the last test is trusted on its test counts.
  for (std::size_t i = last_test + 1; i < log.entries.size(); ++i) {
    for (const auto& r : learner.rules()) {
      if (r.rule_id != log.entries[i].rule_id) continue;
      CHECK(delta_bound(r.counts_for(EnvKind::test), DeltaBoundParams{0.1, 10000, 9}) < 0.11);
    }
  }
}

TEST_CASE("identical seeds give identical logs") {
  Rig rig(5.0);
  auto run = [&](std::uint64_t seed) {
    auto target = rig.target();
    auto test = rig.test();
    return run_learner(config(20, seed), target, test, rig.sc.rules, rig.reward).to_csv();
  };
  const std::string a = run(11);
  CHECK(a == run(11));
  CHECK(a != run(12));
  CHECK(a.rfind("sim_time,env_label,action,rule_id,outcome_index,reward,cum_reward\n", 0) == 0);
}

TEST_CASE("dead ends fail the episode and reset") {
  Scenario sc = reference_scenario();
  sc.rules = {make_rule("lever_pcb", "lever", {"?x"}, {"?b"}, {"pcb(?x)", "in(?x,?b)"},
                        {{"success", {"removed(?x)"}, {"in(?x,?b)"}, ""},
                         {"failure", {"broken(?x)"}, {"pcb(?x)"}, ""}})};
  for (auto* spec : {&sc.target, &sc.test}) {
    spec->ground_truth = {{"lever_pcb", ProbVector{0.0, 0.5, 0.5}}};
    spec->latency = {{"lever", spec == &sc.target ? 20.0 : 1.0}};
  }
  const RewardSpec reward = RewardSpec::from_rules(sc.rules, 1.0, 3.0, sc.target.goal);
  SimulatedEnvironment target(sc.target, sc.rules), test(sc.test, sc.rules);
  LearnerConfig cfg = config(0, 2);
  cfg.total_budget = 2000.0;
  const ExperienceLog log = run_learner(cfg, target, test, sc.rules, reward);
  CHECK(log.failed_episodes > 10);
  double sum = 0.0;
  for (const auto& e : log.entries) sum += e.reward;
  CHECK(log.score() == doctest::Approx(sum - 3.0 * static_cast<double>(log.failed_episodes)));

  sc.target.initial_state = State::parse("bay(b1)");
  SimulatedEnvironment stuck(sc.target, sc.rules);
  CHECK_THROWS_AS(run_learner(cfg, stuck, test, sc.rules, reward), NoApplicableAction);
}

TEST_CASE("testing pays off under a harsh penalty with a deterministic world") {
  // lever always succeeds; shake and suck always fail. A target execution
  // costs 100 s against a 20 s test phase; with 20 s targets the alternation
  // of test phases and executions halves throughput and the baseline wins.
  double with_tests = 0.0, baseline = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    for (double t : {0.0, 20.0}) {
      Rig rig(10.0, 100.0, 1.0);
      for (auto* spec : {&rig.sc.target, &rig.sc.test}) {
        spec->ground_truth["lever_pcb"] = ProbVector{0.0, 1.0, 0.0};
        spec->ground_truth["shake_bay"] = ProbVector{0.0, 0.0, 1.0};
        spec->ground_truth["suck_pcb"] = ProbVector{0.0, 0.0, 1.0};
      }
      auto target = rig.target();
      auto test = rig.test();
      const double score =
          run_learner(config(t, 100 + r), target, test, rig.sc.rules, rig.reward).score();
      (t > 0.0 ? with_tests : baseline) += score / reps;
    }
  }
  CHECK(with_tests > baseline);
}
