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

#include "twinsep/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "twinsep/error.hpp"

namespace twinsep {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void check_params(const ModelParams& p) {
  if (!(p.sbar > 0) || !std::isfinite(p.sbar)) {
    fail(ErrorKind::invalid_input, "model needs a positive finite sbar");
  }
  if (p.bounded() && !(*p.l_cut >= 0)) {
    fail(ErrorKind::invalid_input, "model cutoff must be >= 0");
  }
}

// Mass of 0..floor(l_cut) under the untruncated geometric law, 1 if unbounded.
double support_mass(const ModelParams& p) {
  if (!p.bounded()) return 1.0;
  return -std::expm1(-static_cast<double>(p.l_floor() + 1) / p.sbar);
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

Xoshiro256::result_type Xoshiro256::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::vector<std::uint32_t> sample_separations(const SimConfig& config) {
  check_params(config.params);
  if (config.n_events < 1) fail(ErrorKind::invalid_input, "n_events must be >= 1");
  const ModelParams& p = config.params;
  const double mass = support_mass(p);
  const double cap = p.bounded() ? static_cast<double>(p.l_floor())
                                 : static_cast<double>(std::numeric_limits<std::uint32_t>::max());

  Xoshiro256 rng(config.seed);
  std::vector<std::uint32_t> out;
  out.reserve(config.n_events);
  for (std::uint64_t i = 0; i < config.n_events; ++i) {
    // P(S >= k) = q^k on the untruncated law; invert on the truncated mass.
    const double u = rng.uniform();
    const double k = std::floor(-std::log1p(-u * mass) * p.sbar);
    out.push_back(static_cast<std::uint32_t>(std::min(k, cap)));
  }
  return out;
}

double model_cdf(const ModelParams& p, std::int64_t s) {
  if (s < 0) return 0.0;
  if (p.bounded() && s >= p.l_floor()) return 1.0;
  return -std::expm1(-static_cast<double>(s + 1) / p.sbar) / support_mass(p);
}

GofReport gof_compare(const SeparationSpectrum& empirical, const ModelParams& params,
                      const GofOptions& opts) {
  check_params(params);
  if (!(opts.alpha > 0 && opts.alpha < 1)) {
    fail(ErrorKind::invalid_input, "alpha must lie in (0, 1)");
  }
  const std::uint64_t total_events = empirical.total_intervals();
  if (total_events < opts.min_events) {
    fail(ErrorKind::insufficient_data,
         "goodness of fit needs >= " + std::to_string(opts.min_events) + " events, got " +
             std::to_string(total_events));
  }
  const auto total = static_cast<double>(total_events);

  // Groups are [start, next start); the last one is open-ended.
  struct Group {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Group> groups;
  Group current;
  double cdf_before = 0.0;
  for (std::int64_t s = 0;; ++s) {
    const double cdf = model_cdf(params, s);
    current.expected += total * (cdf - cdf_before);
    current.observed += static_cast<double>(empirical.count(static_cast<std::uint32_t>(s)));
    cdf_before = cdf;
    const double tail_expected = total * (1.0 - cdf);
    if (current.expected >= opts.min_expected && tail_expected >= opts.min_expected) {
      groups.push_back(current);
      current = Group{};
    } else if (tail_expected < opts.min_expected) {
      break;
    }
  }
  // Open tail: everything above the last closed bin.
  current.expected = total;
  current.observed = total;
  for (const Group& g : groups) {
    current.expected -= g.expected;
    current.observed -= g.observed;
  }
  if (current.expected < opts.min_expected && !groups.empty()) {
    groups.back().expected += current.expected;
    groups.back().observed += current.observed;
  } else {
    groups.push_back(current);
  }

  GofReport report;
  report.alpha = opts.alpha;
  report.dof = static_cast<int>(groups.size()) - 1;
  if (report.dof < 1) {
    fail(ErrorKind::insufficient_data, "too few pooled bins for a chi-square test");
  }
  for (const Group& g : groups) {
    const double d = g.observed - g.expected;
    report.chi2 += d * d / g.expected;
  }
  const boost::math::chi_squared_distribution<double> dist(report.dof);
  report.critical_value = boost::math::quantile(boost::math::complement(dist, opts.alpha));
  report.pass = report.chi2 < report.critical_value;

  double cumulative = 0.0;
  for (std::int64_t s = 0; s <= empirical.max_separation(); ++s) {
    cumulative += static_cast<double>(empirical.count(static_cast<std::uint32_t>(s)));
    const double diff = std::abs(cumulative / total - model_cdf(params, s));
    report.ks_distance = std::max(report.ks_distance, diff);
  }
  return report;
}

}  // namespace twinsep
