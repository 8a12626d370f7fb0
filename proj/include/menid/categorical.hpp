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
#include <initializer_list>
#include <vector>

namespace menid {

// Outcome frequencies of one rule in one environment; index 0 is the noise
// outcome.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::size_t size) : counts_(size, 0) {}
  explicit CountVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {}
  CountVector(std::initializer_list<std::uint64_t> counts) : counts_(counts) {}

  std::size_t size() const { return counts_.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts_.at(i); }
  const std::vector<std::uint64_t>& values() const { return counts_; }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : counts_) n += c;
    return n;
  }

  void increment(std::size_t i, std::uint64_t by = 1) { counts_.at(i) += by; }

  bool operator==(const CountVector&) const = default;

 private:
  std::vector<std::uint64_t> counts_;
};

// A categorical distribution. Construction checks the simplex invariants:
// entries in [0, 1] and a sum within 1e-9 of one.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  ProbVector() = default;
  explicit ProbVector(std::vector<double> probs);
  ProbVector(std::initializer_list<double> probs)
      : ProbVector(std::vector<double>(probs)) {}

  static ProbVector uniform(std::size_t size);
  // Scales non-negative weights to sum to one.
  static ProbVector normalized(std::vector<double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_.at(i); }
  const std::vector<double>& values() const { return probs_; }
  std::vector<double>::const_iterator begin() const { return probs_.begin(); }
  std::vector<double>::const_iterator end() const { return probs_.end(); }

  bool operator==(const ProbVector&) const = default;

 private:
  std::vector<double> probs_;
};

// True iff `values` satisfies the simplex invariants.
bool is_simplex(const std::vector<double>& values);

}  // namespace menid
