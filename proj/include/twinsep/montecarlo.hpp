// Copyright 2026 The twinsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "twinsep/model.hpp"
#include "twinsep/spectrum.hpp"

namespace twinsep {

// xoshiro256** seeded through splitmix64 (Blackman & Vigna reference
// algorithms). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kName = "xoshiro256**/splitmix64";

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

struct SimConfig {
  ModelParams params;
  std::uint64_t n_events = 1;
  std::uint64_t seed = 0;
};

// i.i.d. draws from the model pmf renormalized over 0..floor(l_cut), or from
// the untruncated geometric law when the model has no cutoff.
std::vector<std::uint32_t> sample_separations(const SimConfig& config);

// Model CDF P(S <= s) on the same support the sampler uses.
double model_cdf(const ModelParams& p, std::int64_t s);

struct GofReport {
  double chi2 = 0.0;
  int dof = 0;
  double critical_value = 0.0;
  double ks_distance = 0.0;
  double alpha = 0.01;
  bool pass = false;
};

struct GofOptions {
  double alpha = 0.01;
  double min_expected = 5.0;
  std::uint64_t min_events = 50;
};

// Pearson chi-square against total * pmf with adjacent bins pooled until each
// group expects at least `min_expected` (the open upper tail is one group),
// plus the sup distance between the empirical and model CDFs.
GofReport gof_compare(const SeparationSpectrum& empirical, const ModelParams& params,
                      const GofOptions& opts = {});

}  // namespace twinsep
