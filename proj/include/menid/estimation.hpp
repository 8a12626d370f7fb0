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

#include <cstdint>
#include <span>
#include <vector>

#include "menid/categorical.hpp"
#include "menid/random.hpp"

namespace menid {

// Relative frequencies counts[i] / N. Throws EmptySample when N = 0.
ProbVector empirical_estimate(const CountVector& counts);

// One draw from Dir(alpha): independent Gamma(alpha_i, 1) variates normalized
// by their sum. Throws NonPositiveAlpha.
ProbVector sample_dirichlet(std::span<const double> alpha, Rng& rng);

struct DeltaBoundParams {
  double epsilon = 0.1;           // confidence complement, in (0, 1)
  std::size_t sample_size = 10'000;  // posterior draws, >= 100
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinDeltaSamples = 100;

// Posterior error bound: draws `sample_size` vectors from Dir(1 + counts),
// measures the largest componentwise deviation of each from counts / N over
// every outcome (noise included), and returns the round((1 - epsilon) * S)-th
// smallest deviation (1-based). Throws EmptySample when N = 0 and
// InvalidParameter when epsilon rounds the index to 0 or is outside (0, 1).
double delta_bound(const CountVector& counts, const DeltaBoundParams& params);
double delta_bound(const CountVector& counts, double epsilon, std::size_t sample_size, Rng& rng);

// Bounds for several epsilons computed from one shared set of posterior
// draws, so larger epsilons never give larger bounds.
std::vector<double> delta_bounds(const CountVector& counts, std::span<const double> epsilons,
                                 std::size_t sample_size, Rng& rng);

// Same procedure for an explicit Dirichlet parameter and reference point.
// With all-zero counts the learner uses alpha = 1 and the uniform reference.
std::vector<double> delta_bounds_from(std::span<const double> alpha,
                                      std::span<const double> reference,
                                      std::span<const double> epsilons, std::size_t sample_size,
                                      Rng& rng);

// (target_i + test_i) / (N_target + N_test).
ProbVector pooled_estimate(const CountVector& target, const CountVector& test);

// Weight given to each test observation: m / sqrt(1 + N_target).
double test_weight(std::uint64_t target_total, double m);

// Decreasing-m-estimate: (target_i + w * test_i) / (N_target + w * N_test),
// w = test_weight(N_target, m).
ProbVector m_estimate(const CountVector& target, const CountVector& test, double m);

}  // namespace menid
