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

#include "twinsep/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "twinsep/error.hpp"

namespace twinsep {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes <= bound, by a plain byte sieve.
std::vector<std::uint32_t> base_primes(std::uint64_t bound) {
  std::vector<std::uint32_t> primes;
  if (bound < 3) return primes;
  std::vector<char> composite(bound + 1, 0);
  for (std::uint64_t i = 3; i * i <= bound; i += 2) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= bound; j += 2 * i) composite[j] = 1;
  }
  for (std::uint64_t i = 3; i <= bound; i += 2) {
    if (!composite[i]) primes.push_back(static_cast<std::uint32_t>(i));
  }
  return primes;
}

// Bit i of a segment starting at odd index `first` stands for 2*(first+i)+1.
class SegmentSieve {
 public:
  SegmentSieve(std::uint64_t limit, std::uint64_t segment_flags)
      : odd_count_((limit + 1) / 2),
        segment_flags_(segment_flags),
        primes_(base_primes(isqrt(limit))) {}

  std::uint64_t segment_count() const {
    return (odd_count_ + segment_flags_ - 1) / segment_flags_;
  }

  // Appends the odd primes of segment `k` to `out`, ascending.
  void run(std::uint64_t k, std::vector<std::uint64_t>& out) const {
    const std::uint64_t first = k * segment_flags_;
    const std::uint64_t count = std::min(segment_flags_, odd_count_ - first);
    std::vector<std::uint64_t> words((count + 63) / 64, ~std::uint64_t{0});
    if (count % 64 != 0) words.back() = (std::uint64_t{1} << (count % 64)) - 1;
    if (first == 0) words[0] &= ~std::uint64_t{1};  // 1 is not prime

    const std::uint64_t lo = 2 * first + 1;
    const std::uint64_t hi = 2 * (first + count) - 1;  // inclusive
    for (std::uint32_t p : primes_) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > hi) break;
      std::uint64_t start = pp;
      if (start < lo) {
        start = (lo + p - 1) / p * p;
        if (start % 2 == 0) start += p;
      }
      for (std::uint64_t idx = (start - 1) / 2 - first; idx < count; idx += p) {
        words[idx / 64] &= ~(std::uint64_t{1} << (idx % 64));
      }
    }

    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        const auto bit = static_cast<std::uint64_t>(std::countr_zero(bits));
        out.push_back(2 * (first + w * 64 + bit) + 1);
        bits &= bits - 1;
      }
    }
  }

 private:
  std::uint64_t odd_count_;
  std::uint64_t segment_flags_;
  std::vector<std::uint32_t> primes_;
};

// Consumes primes in ascending order and maintains counts, twin detection,
// separations and checkpoint emission. `pending_` counts primes seen since
// the upper member of the last twin.
class StreamMerger {
 public:
  explicit StreamMerger(const std::vector<std::uint64_t>& grid) : grid_(grid) {}

  void push(std::uint64_t p) {
    emit_checkpoints_below(p);
    ++pi1_;
    if (prev_ != 0 && p == prev_ + 2) {
      ++pi2_;
      const std::uint64_t lower = prev_;
      if (lower == 3) {
        // (3,5) is discarded; 5 opens the first counted twin (5,7).
      } else if (lower != 5) {
        // `lower` itself is still counted in pending_.
        const std::uint64_t singletons = pending_ - 1;
        if (singletons > std::numeric_limits<std::uint32_t>::max()) {
          fail(ErrorKind::capacity, "separation exceeds 32-bit range");
        }
        const auto s = static_cast<std::uint32_t>(singletons);
        report_.separations.push_back(s);
        onsets_.observe(s, lower);
      }
      pending_ = 0;
      last_upper_ = p;
    } else {
      ++pending_;
    }
    prev_ = p;
  }

  SieveReport finish() {
    emit_checkpoints_below(std::numeric_limits<std::uint64_t>::max());
    report_.max_separation_onsets = onsets_.take();
    return std::move(report_);
  }

 private:
  void emit_checkpoints_below(std::uint64_t p) {
    while (next_ < grid_.size() && grid_[next_] < p) {
      CountRecord rec{grid_[next_], pi1_, pi2_, std::nullopt};
      if (pi2_ >= 1 && pi1_ >= pending_ + 2) {
        rec.pi1_adjusted = adjusted_pi1(rec, last_upper_, pending_);
      }
      report_.counts.push_back(rec);
      ++next_;
    }
  }

  const std::vector<std::uint64_t>& grid_;
  std::size_t next_ = 0;
  std::uint64_t pi1_ = 0;
  std::uint64_t pi2_ = 0;
  std::uint64_t pending_ = 0;
  std::uint64_t prev_ = 0;
  std::uint64_t last_upper_ = 0;
  OnsetTracker onsets_;
  SieveReport report_;
};

}  // namespace

void validate(const SieveConfig& config) {
  if (config.limit < 2) {
    fail(ErrorKind::invalid_input, "limit must be >= 2");
  }
  if (config.limit > SieveConfig::kMaxLimit) {
    fail(ErrorKind::capacity, "limit exceeds supported range (2^48)");
  }
  if (config.segment_size < SieveConfig::kMinSegment) {
    fail(ErrorKind::invalid_input, "segment_size must be >= 1024");
  }
  const auto& grid = config.checkpoint_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2 || grid[i] > config.limit) {
      fail(ErrorKind::invalid_input,
           "checkpoint " + std::to_string(grid[i]) + " outside [2, limit]");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      fail(ErrorKind::invalid_input, "checkpoint grid must be strictly increasing");
    }
  }
}

SieveReport sieve_range(const SieveConfig& config) {
  validate(config);
  const std::uint64_t flags = (config.segment_size + 63) / 64 * 64;
  const SegmentSieve sieve(config.limit, flags);
  StreamMerger merger(config.checkpoint_grid);
  merger.push(2);

  unsigned workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t segments = sieve.segment_count();

  std::vector<std::vector<std::uint64_t>> batch(workers);
  for (std::uint64_t base = 0; base < segments; base += workers) {
    const auto n = static_cast<unsigned>(std::min<std::uint64_t>(workers, segments - base));
    for (auto& b : batch) b.clear();
    if (n == 1) {
      sieve.run(base, batch[0]);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(n);
      for (unsigned i = 0; i < n; ++i) {
        threads.emplace_back([&, i] { sieve.run(base + i, batch[i]); });
      }
    }
    for (unsigned i = 0; i < n; ++i) {
      for (std::uint64_t p : batch[i]) merger.push(p);
    }
  }
  return merger.finish();
}

std::uint64_t adjusted_pi1(const CountRecord& record,
                           std::uint64_t last_twin_upper,
                           std::uint64_t trailing_singletons) {
  if (last_twin_upper > record.n) {
    fail(ErrorKind::inconsistent_input, "last twin lies beyond the checkpoint");
  }
  if (record.pi1 < trailing_singletons + 2) {
    fail(ErrorKind::inconsistent_input,
         "adjusted pi1 would be negative (pi1=" + std::to_string(record.pi1) +
             ", trailing singletons=" + std::to_string(trailing_singletons) + ")");
  }
  return record.pi1 - trailing_singletons - 2;
}

std::vector<Onset> max_gap_onsets(std::span<const std::uint32_t> separations,
                                  std::span<const std::uint64_t> twin_lower) {
  if (separations.empty()) {
    if (twin_lower.size() > 1) {
      fail(ErrorKind::invalid_input, "twin positions without separations");
    }
    return {};
  }
  if (twin_lower.size() != separations.size() + 1) {
    fail(ErrorKind::invalid_input,
         "expected " + std::to_string(separations.size() + 1) +
             " twin positions, got " + std::to_string(twin_lower.size()));
  }
  OnsetTracker tracker;
  for (std::size_t i = 0; i < separations.size(); ++i) {
    tracker.observe(separations[i], twin_lower[i + 1]);
  }
  return tracker.take();
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t limit, unsigned per_decade,
                                          std::uint64_t start) {
  if (per_decade == 0) fail(ErrorKind::invalid_input, "points per decade must be >= 1");
  if (start < 2) start = 2;
  std::vector<std::uint64_t> grid;
  const double k0 = std::ceil(std::log10(static_cast<double>(start)) * per_decade - 1e-9);
  for (double k = k0;; k += 1.0) {
    const auto v = static_cast<std::uint64_t>(std::llround(std::pow(10.0, k / per_decade)));
    if (v > limit) break;
    if (v >= start && (grid.empty() || v > grid.back())) grid.push_back(v);
  }
  if (limit >= start && (grid.empty() || grid.back() != limit)) grid.push_back(limit);
  return grid;
}

std::vector<std::uint64_t> parse_checkpoint_spec(const std::string& spec,
                                                 std::uint64_t limit) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "geometric") {
      const unsigned per = arg.empty() ? 20u : static_cast<unsigned>(std::stoul(arg));
      return geometric_grid(limit, per);
    }
    if (kind == "list") {
      std::vector<std::uint64_t> grid;
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) grid.push_back(std::stoull(item));
      }
      return grid;
    }
  } catch (const std::logic_error&) {
    fail(ErrorKind::invalid_input, "malformed checkpoint spec '" + spec + "'");
  }
  fail(ErrorKind::invalid_input,
       "checkpoint spec must be geometric:<k> or list:<n,...>, got '" + spec + "'");
}

}  // namespace twinsep
