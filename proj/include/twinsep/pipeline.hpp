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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twinsep/fit.hpp"
#include "twinsep/io.hpp"
#include "twinsep/sieve.hpp"
#include "twinsep/spectrum.hpp"

namespace twinsep {

struct SeriesPoint {
  std::string series;
  std::uint64_t n = 0;
  double x = 0.0;
  double value = 0.0;
  std::optional<double> std_error;
};

struct FigureData {
  std::string x_name;
  std::vector<SeriesPoint> points;

  std::size_t count(const std::string& series) const;
};

// Plot datasets for
//   fig1: 1/s0 ("synthetic"), slopes fitted to spectra ("computed") and the
//         fitted m0 / ln(pi1) law ("law") against ln(pi1);
//   fig2: s0 ("s0") and its linear fit ("linear_fit") against ln(pi1);
//   fig3: predicted cutoff ("l_cut"), its ceiling ("l_ceil") and observed
//         record onsets ("onset") against ln(n).
struct FigureSet {
  FigureData fig1;
  FigureData fig2;
  FigureData fig3;
  std::optional<FitResult> m0_fit;
  std::optional<FitResult> s0_fit;
  // Rows for which s0 or the cutoff could not be formed (too few twins).
  std::size_t skipped_rows = 0;
};

struct FigureInputs {
  std::span<const CountRecord> rows;
  // One spectrum per row, or empty.
  std::span<const SeparationSpectrum> spectra;
  std::span<const Onset> onsets;
  double f = 1.0;
  S0Convention convention = S0Convention::raw;
};

FigureSet figure_pipeline(const FigureInputs& in);

// Header `series,n,<x_name>,value,std_error`.
void write_figure_csv(const std::filesystem::path& path, const FigureData& fig,
                      const Metadata& meta);

// Derived per-checkpoint quantities used by the desk-scale checks.
struct CheckpointStats {
  CountRecord record;
  double s0 = 0.0;
  std::optional<FitResult> slope;  // fit_exp_slope on the cumulative spectrum
  std::uint32_t max_separation = 0;
  double l_cut = 0.0;
};

std::vector<CheckpointStats> checkpoint_stats(std::span<const CountRecord> rows,
                                              std::span<const SeparationSpectrum> spectra,
                                              double f, S0Convention convention);

}  // namespace twinsep
