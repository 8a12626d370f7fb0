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
#include <random>
#include <string_view>

namespace menid {

// The engine behind every stochastic component. std::mt19937_64 has a
// standardized output sequence, and the variate transforms below are written
// by hand, so draws are reproducible across standard library implementations.
using Rng = std::mt19937_64;

// Seed for the named sub-stream `stream` of a root seed (splitmix64 over an
// FNV-1a hash of the name).
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

inline Rng make_stream(std::uint64_t root, std::string_view stream) {
  return Rng(derive_seed(root, stream));
}

// Uniform on the open interval (0, 1), 53 bits of resolution.
double uniform01(Rng& rng);

// Standard normal via the Marsaglia polar method.
double standard_normal(Rng& rng);

// Gamma(shape, 1). Marsaglia-Tsang squeeze/rejection for shape >= 1; for
// shape < 1 a Gamma(shape + 1) draw is scaled by U^(1/shape).
double sample_gamma(double shape, Rng& rng);

}  // namespace menid
