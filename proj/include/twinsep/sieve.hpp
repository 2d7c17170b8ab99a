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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace twinsep {

// Prime and twin counts at one bound N. Twins are pairs (p, p+2) with both
// members <= N; (3,5) is included in pi2.
struct CountRecord {
  std::uint64_t n = 0;
  std::uint64_t pi1 = 0;
  std::uint64_t pi2 = 0;
  // pi1 with the singletons after the last twin and the primes 2 and 3 removed.
  std::optional<std::uint64_t> pi1_adjusted;

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

// A new running-maximum separation and the lower member of the twin that
// closes the interval in which it first occurs.
struct Onset {
  std::uint32_t separation = 0;
  std::uint64_t n = 0;

  friend bool operator==(const Onset&, const Onset&) = default;
};

struct SieveConfig {
  static constexpr std::uint64_t kDefaultSegment = std::uint64_t{1} << 20;
  static constexpr std::uint64_t kMinSegment = 1024;
  static constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 48;

  std::uint64_t limit = 2;
  // Odd-number flags per segment; rounded up to a multiple of 64.
  std::uint64_t segment_size = kDefaultSegment;
  // Strictly increasing, every entry <= limit. May be empty.
  std::vector<std::uint64_t> checkpoint_grid;
  // 0 selects std::thread::hardware_concurrency().
  unsigned workers = 1;
};

struct SieveReport {
  std::vector<CountRecord> counts;
  std::vector<std::uint32_t> separations;
  std::vector<Onset> max_separation_onsets;

  friend bool operator==(const SieveReport&, const SieveReport&) = default;
};

// Throws Error{invalid_input} if the configuration breaks its invariants.
void validate(const SieveConfig& config);

SieveReport sieve_range(const SieveConfig& config);

// pi1 - trailing_singletons - 2. `last_twin_upper` must not exceed record.n.
std::uint64_t adjusted_pi1(const CountRecord& record,
                           std::uint64_t last_twin_upper,
                           std::uint64_t trailing_singletons);

// `twin_lower[i + 1]` is the lower member of the twin closing separation i;
// twin_lower.size() must be separations.size() + 1 (or 0 when empty).
std::vector<Onset> max_gap_onsets(std::span<const std::uint32_t> separations,
                                  std::span<const std::uint64_t> twin_lower);

// Geometric grid with `per_decade` points per power of ten, from 10 up to
// `limit`, rounded to integers and deduplicated. `limit` itself is appended.
std::vector<std::uint64_t> geometric_grid(std::uint64_t limit,
                                          unsigned per_decade,
                                          std::uint64_t start = 10);

// Parses "geometric:<k>" or "list:<n1>,<n2>,...".
std::vector<std::uint64_t> parse_checkpoint_spec(const std::string& spec,
                                                 std::uint64_t limit);

// Running-maximum bookkeeping shared by the streaming sieve and
// max_gap_onsets.
class OnsetTracker {
 public:
  void observe(std::uint32_t separation, std::uint64_t n) {
    if (!seen_ || separation > best_) {
      best_ = separation;
      seen_ = true;
      onsets_.push_back({separation, n});
    }
  }
  const std::vector<Onset>& onsets() const { return onsets_; }
  std::vector<Onset> take() { return std::move(onsets_); }

 private:
  bool seen_ = false;
  std::uint32_t best_ = 0;
  std::vector<Onset> onsets_;
};

}  // namespace twinsep
