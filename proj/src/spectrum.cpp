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

#include "twinsep/spectrum.hpp"

#include <string>

#include "twinsep/error.hpp"

namespace twinsep {

void SeparationSpectrum::add(std::uint32_t separation, std::uint64_t count) {
  if (count == 0) return;
  bins_[separation] += count;
  total_intervals_ += count;
  total_singletons_ += count * separation;
}

std::uint64_t SeparationSpectrum::count(std::uint32_t separation) const {
  const auto it = bins_.find(separation);
  return it == bins_.end() ? 0 : it->second;
}

SeparationSpectrum accumulate(std::span<const std::uint32_t> separations) {
  SeparationSpectrum out;
  for (std::uint32_t s : separations) out.add(s);
  return out;
}

SeparationSpectrum merge(const SeparationSpectrum& a, const SeparationSpectrum& b) {
  SeparationSpectrum out = a;
  for (const auto& [s, c] : b.bins()) out.add(s, c);
  return out;
}

std::vector<SeparationSpectrum> spectra_at_checkpoints(
    std::span<const CountRecord> counts, std::span<const std::uint32_t> separations) {
  std::vector<SeparationSpectrum> out;
  out.reserve(counts.size());
  SeparationSpectrum running;
  std::size_t used = 0;
  for (const CountRecord& rec : counts) {
    const std::uint64_t intervals = rec.pi2 >= 2 ? rec.pi2 - 2 : 0;
    if (intervals < used) {
      fail(ErrorKind::invalid_input, "checkpoints must have non-decreasing pi2");
    }
    if (intervals > separations.size()) {
      fail(ErrorKind::inconsistent_input,
           "checkpoint n=" + std::to_string(rec.n) + " needs " + std::to_string(intervals) +
               " separations, stream has " + std::to_string(separations.size()));
    }
    for (; used < intervals; ++used) running.add(separations[used]);
    out.push_back(running);
  }
  return out;
}

std::string_view to_string(S0Convention c) {
  switch (c) {
    case S0Convention::raw: return "raw";
    case S0Convention::paper_offset: return "paper_offset";
    case S0Convention::interval_exact: return "interval_exact";
  }
  return "raw";
}

S0Convention parse_s0_convention(std::string_view name) {
  if (name == "raw") return S0Convention::raw;
  if (name == "paper" || name == "paper_offset") return S0Convention::paper_offset;
  if (name == "exact" || name == "interval_exact") return S0Convention::interval_exact;
  fail(ErrorKind::invalid_input, "unknown s0 convention '" + std::string(name) + "'");
}

S0Estimate s0_from_counts(const CountRecord& record, S0Convention convention,
                          const SeparationSpectrum* spectrum) {
  const auto pi1 = static_cast<double>(record.pi1);
  const auto pi2 = static_cast<double>(record.pi2);
  S0Estimate est{0.0, convention};
  switch (convention) {
    case S0Convention::raw:
      if (record.pi2 == 0) {
        fail(ErrorKind::insufficient_data, "raw s0 needs pi2 > 0");
      }
      est.value = (pi1 - 2 * pi2) / pi2;
      break;
    case S0Convention::paper_offset:
      if (record.pi2 <= 2) {
        fail(ErrorKind::insufficient_data, "offset s0 needs pi2 > 2");
      }
      est.value = (pi1 - 2 * pi2 + 2) / (pi2 - 2);
      break;
    case S0Convention::interval_exact:
      if (spectrum != nullptr) {
        if (spectrum->total_intervals() == 0) {
          fail(ErrorKind::insufficient_data, "spectrum has no intervals");
        }
        est.value = static_cast<double>(spectrum->total_singletons()) /
                    static_cast<double>(spectrum->total_intervals());
      } else {
        if (!record.pi1_adjusted) {
          fail(ErrorKind::insufficient_data,
               "interval-exact s0 needs a spectrum or an adjusted pi1");
        }
        if (record.pi2 <= 2) {
          fail(ErrorKind::insufficient_data, "interval-exact s0 needs pi2 > 2");
        }
        est.value = (static_cast<double>(*record.pi1_adjusted) - 2 * pi2 + 2) / (pi2 - 2);
      }
      break;
  }
  if (est.value < 0) {
    fail(ErrorKind::inconsistent_input, "counts imply a negative s0");
  }
  return est;
}

}  // namespace twinsep
