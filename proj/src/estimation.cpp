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

#include "menid/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "menid/errors.hpp"

namespace menid {
namespace {

void require_same_length(const CountVector& a, const CountVector& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("count vectors of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
}

std::size_t quantile_index(double epsilon, std::size_t sample_size) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("epsilon must lie in (0, 1)");
  }
  const double q = std::round((1.0 - epsilon) * static_cast<double>(sample_size));
  if (q < 1.0) {
    throw InvalidParameter("epsilon " + std::to_string(epsilon) + " with S = " +
                           std::to_string(sample_size) + " selects no sample");
  }
  return std::min(static_cast<std::size_t>(q), sample_size);
}

}  // namespace

ProbVector empirical_estimate(const CountVector& counts) {
  const std::uint64_t n = counts.total();
  if (n == 0) throw EmptySample("empirical estimate of an empty sample");
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return ProbVector(std::move(p));
}

ProbVector sample_dirichlet(std::span<const double> alpha, Rng& rng) {
  if (alpha.empty()) throw NonPositiveAlpha("empty Dirichlet parameter");
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw NonPositiveAlpha("Dirichlet parameters must be positive and finite");
    }
  }
  std::vector<double> draw(alpha.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    draw[i] = sample_gamma(alpha[i], rng);
    sum += draw[i];
  }
  for (double& d : draw) d /= sum;
  return ProbVector(std::move(draw));
}

std::vector<double> delta_bounds_from(std::span<const double> alpha,
                                      std::span<const double> reference,
                                      std::span<const double> epsilons, std::size_t sample_size,
                                      Rng& rng) {
  if (alpha.size() != reference.size()) {
    throw LengthMismatch("Dirichlet parameter and reference differ in length");
  }
  if (sample_size < kMinDeltaSamples) {
    throw InvalidParameter("delta bound needs at least " + std::to_string(kMinDeltaSamples) +
                           " samples");
  }
  std::vector<std::size_t> indices;
  indices.reserve(epsilons.size());
  for (double eps : epsilons) indices.push_back(quantile_index(eps, sample_size));

  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw NonPositiveAlpha("Dirichlet parameters must be positive and finite");
    }
  }
  // Same draw as sample_dirichlet, without a per-sample allocation.
  std::vector<double> draw(alpha.size());
  std::vector<double> errors(sample_size);
  for (std::size_t j = 0; j < sample_size; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      draw[i] = sample_gamma(alpha[i], rng);
      sum += draw[i];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < draw.size(); ++i) {
      worst = std::max(worst, std::abs(draw[i] / sum - reference[i]));
    }
    errors[j] = worst;
  }
  std::sort(errors.begin(), errors.end());

  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t q : indices) out.push_back(errors[q - 1]);
  return out;
}

std::vector<double> delta_bounds(const CountVector& counts, std::span<const double> epsilons,
                                 std::size_t sample_size, Rng& rng) {
  const std::uint64_t n = counts.total();
  if (n == 0) throw EmptySample("delta bound of an empty sample");
  std::vector<double> alpha(counts.size());
  std::vector<double> mode(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    alpha[i] = 1.0 + static_cast<double>(counts[i]);
    mode[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return delta_bounds_from(alpha, mode, epsilons, sample_size, rng);
}

double delta_bound(const CountVector& counts, double epsilon, std::size_t sample_size, Rng& rng) {
  const double eps[] = {epsilon};
  return delta_bounds(counts, eps, sample_size, rng).front();
}

double delta_bound(const CountVector& counts, const DeltaBoundParams& params) {
  Rng rng(params.seed);
  return delta_bound(counts, params.epsilon, params.sample_size, rng);
}

ProbVector pooled_estimate(const CountVector& target, const CountVector& test) {
  require_same_length(target, test);
  const std::uint64_t n = target.total() + test.total();
  if (n == 0) throw EmptySample("pooled estimate of two empty samples");
  std::vector<double> p(target.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = static_cast<double>(target[i] + test[i]) / static_cast<double>(n);
  }
  return ProbVector(std::move(p));
}

double test_weight(std::uint64_t target_total, double m) {
  return m / std::sqrt(1.0 + static_cast<double>(target_total));
}

ProbVector m_estimate(const CountVector& target, const CountVector& test, double m) {
  require_same_length(target, test);
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParameter("m must be positive");
  const std::uint64_t n1 = target.total();
  const std::uint64_t n2 = test.total();
  if (n1 + n2 == 0) throw EmptySample("m-estimate of two empty samples");
  const double w = test_weight(n1, m);
  const double denom = static_cast<double>(n1) + w * static_cast<double>(n2);
  std::vector<double> p(target.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (static_cast<double>(target[i]) + w * static_cast<double>(test[i])) / denom;
  }
  return ProbVector(std::move(p));
}

}  // namespace menid
