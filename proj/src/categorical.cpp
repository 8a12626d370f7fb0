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

#include "menid/categorical.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "menid/errors.hpp"

namespace menid {

bool is_simplex(const std::vector<double>& values) {
  if (values.empty()) return false;
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= ProbVector::kSumTolerance;
}

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (!is_simplex(probs_)) {
    std::string shown;
    for (double p : probs_) shown += (shown.empty() ? "" : ", ") + std::to_string(p);
    throw InvalidParameter("not a probability vector: [" + shown + "]");
  }
}

ProbVector ProbVector::uniform(std::size_t size) {
  if (size == 0) throw InvalidParameter("uniform distribution over zero outcomes");
  return ProbVector(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

ProbVector ProbVector::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidParameter("negative or non-finite weight");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw InvalidParameter("weights sum to zero");
  for (double& w : weights) w /= sum;
  return ProbVector(std::move(weights));
}

}  // namespace menid
