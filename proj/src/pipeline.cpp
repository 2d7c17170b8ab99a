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

#include "twinsep/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "twinsep/error.hpp"
#include "twinsep/model.hpp"

namespace twinsep {

std::size_t FigureData::count(const std::string& series) const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.series == series ? 1 : 0;
  return n;
}

std::vector<CheckpointStats> checkpoint_stats(std::span<const CountRecord> rows,
                                              std::span<const SeparationSpectrum> spectra,
                                              double f, S0Convention convention) {
  if (!spectra.empty() && spectra.size() != rows.size()) {
    fail(ErrorKind::invalid_input, "need one spectrum per count row");
  }
  std::vector<CheckpointStats> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SeparationSpectrum* spectrum = spectra.empty() ? nullptr : &spectra[i];
    CheckpointStats st;
    st.record = rows[i];
    try {
      const Prediction pred = predict(rows[i], f, convention, spectrum);
      if (!(pred.s0 > 0)) continue;
      st.s0 = pred.s0;
      st.l_cut = *pred.params.l_cut;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::io) throw;
      continue;
    }
    if (spectrum != nullptr) {
      st.max_separation = spectrum->max_separation();
      if (spectrum->bins().size() >= 3) st.slope = fit_exp_slope(*spectrum);
    }
    out.push_back(std::move(st));
  }
  return out;
}

FigureSet figure_pipeline(const FigureInputs& in) {
  if (in.rows.empty()) fail(ErrorKind::invalid_input, "count table is empty");
  const std::vector<CheckpointStats> stats =
      checkpoint_stats(in.rows, in.spectra, in.f, in.convention);

  FigureSet out;
  out.skipped_rows = in.rows.size() - stats.size();
  out.fig1.x_name = "log_pi1";
  out.fig2.x_name = "log_pi1";
  out.fig3.x_name = "log_n";

  std::vector<FitPoint> slope_points;
  std::vector<FitPoint> s0_points;
  for (const CheckpointStats& st : stats) {
    const auto pi1 = static_cast<double>(st.record.pi1);
    const double x = std::log(pi1);
    out.fig1.points.push_back({"synthetic", st.record.n, x, 1.0 / st.s0, std::nullopt});
    if (st.slope) {
      const double m = -st.slope->coefficients[1];
      out.fig1.points.push_back({"computed", st.record.n, x, m, st.slope->std_errors[1]});
      if (pi1 >= 3) slope_points.push_back({pi1, m});
    }
    out.fig2.points.push_back({"s0", st.record.n, x, st.s0, std::nullopt});
    s0_points.push_back({pi1, st.s0});

    const double log_n = std::log(static_cast<double>(st.record.n));
    out.fig3.points.push_back({"l_cut", st.record.n, log_n, st.l_cut, std::nullopt});
    out.fig3.points.push_back({"l_ceil", st.record.n, log_n, std::ceil(st.l_cut), std::nullopt});
  }

  if (slope_points.size() >= 2) {
    out.m0_fit = fit_m0(slope_points);
    const double m0 = out.m0_fit->coefficients[0];
    for (const CheckpointStats& st : stats) {
      const auto pi1 = static_cast<double>(st.record.pi1);
      if (pi1 < 3) continue;
      out.fig1.points.push_back({"law", st.record.n, std::log(pi1), m0 / std::log(pi1),
                                 std::nullopt});
    }
  }
  if (s0_points.size() >= 2) {
    try {
      out.s0_fit = fit_s0_linear(s0_points);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_fit) throw;
    }
  }
  if (out.s0_fit) {
    const auto& c = out.s0_fit->coefficients;
    for (const CheckpointStats& st : stats) {
      const double x = std::log(static_cast<double>(st.record.pi1));
      out.fig2.points.push_back({"linear_fit", st.record.n, x, c[0] + c[1] * x, std::nullopt});
    }
  }
  for (const Onset& o : in.onsets) {
    out.fig3.points.push_back({"onset", o.n, std::log(static_cast<double>(o.n)),
                               static_cast<double>(o.separation), std::nullopt});
  }
  return out;
}

void write_figure_csv(const std::filesystem::path& path, const FigureData& fig,
                      const Metadata& meta) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << format_metadata(meta) << '\n';
  out << "series,n," << fig.x_name << ",value,std_error\n";
  out << std::setprecision(12);
  for (const SeriesPoint& p : fig.points) {
    out << p.series << ',' << p.n << ',' << p.x << ',' << p.value << ',';
    if (p.std_error) out << *p.std_error;
    out << '\n';
  }
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

}  // namespace twinsep
