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

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "twinsep/sieve.hpp"

namespace twinsep {

// Histogram of prime separations: separation -> number of twin intervals.
// Only nonzero bins are stored.
class SeparationSpectrum {
 public:
  using Bins = std::map<std::uint32_t, std::uint64_t>;

  SeparationSpectrum() = default;

  void add(std::uint32_t separation, std::uint64_t count = 1);

  const Bins& bins() const { return bins_; }
  std::uint64_t count(std::uint32_t separation) const;
  std::uint64_t total_intervals() const { return total_intervals_; }
  std::uint64_t total_singletons() const { return total_singletons_; }
  bool empty() const { return bins_.empty(); }
  std::uint32_t max_separation() const { return bins_.empty() ? 0 : bins_.rbegin()->first; }

  friend bool operator==(const SeparationSpectrum&, const SeparationSpectrum&) = default;

 private:
  Bins bins_;
  std::uint64_t total_intervals_ = 0;
  std::uint64_t total_singletons_ = 0;
};

SeparationSpectrum accumulate(std::span<const std::uint32_t> separations);

SeparationSpectrum merge(const SeparationSpectrum& a, const SeparationSpectrum& b);

// Cumulative spectrum at every checkpoint. The intervals closed by N are the
// first pi2(N) - 2 entries of the separation stream.
std::vector<SeparationSpectrum> spectra_at_checkpoints(
    std::span<const CountRecord> counts, std::span<const std::uint32_t> separations);

enum class S0Convention {
  raw,             // (pi1 - 2 pi2) / pi2
  paper_offset,    // (pi1 - 2 pi2 + 2) / (pi2 - 2)
  interval_exact,  // singletons / intervals between counted twins
};

std::string_view to_string(S0Convention c);
// Accepts "raw", "paper", "paper_offset", "exact", "interval_exact".
S0Convention parse_s0_convention(std::string_view name);

struct S0Estimate {
  double value = 0.0;
  S0Convention convention = S0Convention::raw;
};

// interval_exact uses `spectrum` when given; otherwise it is recovered from
// pi1_adjusted as (pi1_adjusted - 2 pi2 + 2) / (pi2 - 2). Throws
// insufficient_data when the denominator is not positive.
S0Estimate s0_from_counts(const CountRecord& record, S0Convention convention,
                          const SeparationSpectrum* spectrum = nullptr);

}  // namespace twinsep
