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

#include "twinsep/twinsep.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "twinsep/error.hpp"
#include "twinsep/fit.hpp"
#include "twinsep/io.hpp"
#include "twinsep/model.hpp"
#include "twinsep/montecarlo.hpp"
#include "twinsep/pipeline.hpp"
#include "twinsep/sieve.hpp"
#include "twinsep/spectrum.hpp"

struct twinsep_sieve_report {
  twinsep::SieveReport value;
};
struct twinsep_spectrum {
  twinsep::SeparationSpectrum value;
};
struct twinsep_count_table {
  twinsep::CountTable value;
};
struct twinsep_fit {
  twinsep::FitResult value;
};
struct twinsep_figures {
  twinsep::FigureSet value;
  twinsep::Metadata metadata;
};

namespace {

using namespace twinsep;

thread_local std::string g_last_error;

twinsep_status status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::no_solution:
    case ErrorKind::convergence:
    case ErrorKind::singular_fit:
      return TWINSEP_ERR_NUMERICAL;
    case ErrorKind::io:
      return TWINSEP_ERR_IO;
    default:
      return TWINSEP_ERR_VALIDATION;
  }
}

template <class F>
twinsep_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TWINSEP_OK;
  } catch (const Error& e) {
    g_last_error = std::string(to_string(e.kind())) + ": " + e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TWINSEP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TWINSEP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorKind::invalid_input, std::string(what) + " must not be NULL");
}

twinsep_count_record to_c(const CountRecord& r) {
  return {r.n, r.pi1, r.pi2, r.pi1_adjusted ? 1 : 0, r.pi1_adjusted.value_or(0)};
}

CountRecord from_c(const twinsep_count_record& r) {
  CountRecord out{r.n, r.pi1, r.pi2, std::nullopt};
  if (r.has_pi1_adjusted) out.pi1_adjusted = r.pi1_adjusted;
  return out;
}

twinsep_model_params to_c(const ModelParams& p) {
  return {p.a, p.sbar, p.q, p.l_cut.value_or(0.0), p.bounded() ? 1 : 0, p.f};
}

ModelParams from_c(const twinsep_model_params& p) {
  ModelParams out;
  out.a = p.a;
  out.sbar = p.sbar;
  out.q = p.q;
  if (p.bounded) out.l_cut = p.l_cut;
  out.f = p.f;
  return out;
}

S0Convention from_c(twinsep_s0_convention c) {
  switch (c) {
    case TWINSEP_S0_RAW: return S0Convention::raw;
    case TWINSEP_S0_PAPER_OFFSET: return S0Convention::paper_offset;
    case TWINSEP_S0_INTERVAL_EXACT: return S0Convention::interval_exact;
  }
  fail(ErrorKind::invalid_input, "unknown s0 convention");
}

twinsep_fit_kind to_c(FitModel m) {
  switch (m) {
    case FitModel::exp_slope: return TWINSEP_FIT_EXP_SLOPE;
    case FitModel::m0_law: return TWINSEP_FIT_M0;
    case FitModel::s0_linear: return TWINSEP_FIT_S0_LINEAR;
    case FitModel::s0_loglog: return TWINSEP_FIT_S0_LOGLOG;
  }
  return TWINSEP_FIT_EXP_SLOPE;
}

template <class T>
T* copy_to_malloc(const T* data, std::size_t n) {
  auto* out = static_cast<T*>(std::malloc(n == 0 ? 1 : n * sizeof(T)));
  if (out == nullptr) throw std::bad_alloc();
  if (n != 0) std::memcpy(out, data, n * sizeof(T));
  return out;
}

template <class T>
void copy_out(const std::vector<T>& v, T* out, std::size_t capacity, std::size_t* len) {
  require(len, "len");
  *len = v.size();
  if (out == nullptr) return;
  if (capacity < v.size()) {
    fail(ErrorKind::invalid_input, "output buffer holds " + std::to_string(capacity) +
                                       " entries, need " + std::to_string(v.size()));
  }
  std::copy(v.begin(), v.end(), out);
}

}  // namespace

extern "C" {

const char* twinsep_last_error(void) { return g_last_error.c_str(); }

const char* twinsep_version(void) { return "1.0.0"; }

void twinsep_buffer_free(void* buffer) { std::free(buffer); }

twinsep_status twinsep_checkpoint_grid(const char* spec, uint64_t limit, uint64_t* out,
                                       size_t capacity, size_t* len) {
  return guarded([&] {
    require(spec, "spec");
    copy_out(parse_checkpoint_spec(spec, limit), out, capacity, len);
  });
}

twinsep_status twinsep_sieve_run(const twinsep_sieve_config* config, twinsep_sieve_report** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    SieveConfig cfg;
    cfg.limit = config->limit;
    if (config->segment_size != 0) cfg.segment_size = config->segment_size;
    if (config->n_checkpoints != 0) {
      require(config->checkpoints, "checkpoints");
      cfg.checkpoint_grid.assign(config->checkpoints,
                                 config->checkpoints + config->n_checkpoints);
    }
    cfg.workers = config->workers;
    *out = new twinsep_sieve_report{sieve_range(cfg)};
  });
}

void twinsep_sieve_report_free(twinsep_sieve_report* report) { delete report; }

size_t twinsep_sieve_report_count_len(const twinsep_sieve_report* report) {
  return report == nullptr ? 0 : report->value.counts.size();
}

twinsep_status twinsep_sieve_report_count_at(const twinsep_sieve_report* report, size_t i,
                                             twinsep_count_record* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    if (i >= report->value.counts.size()) fail(ErrorKind::invalid_input, "index out of range");
    *out = to_c(report->value.counts[i]);
  });
}

const uint32_t* twinsep_sieve_report_separations(const twinsep_sieve_report* report,
                                                 size_t* len) {
  if (report == nullptr) {
    if (len != nullptr) *len = 0;
    return nullptr;
  }
  if (len != nullptr) *len = report->value.separations.size();
  return report->value.separations.data();
}

size_t twinsep_sieve_report_onset_len(const twinsep_sieve_report* report) {
  return report == nullptr ? 0 : report->value.max_separation_onsets.size();
}

twinsep_status twinsep_sieve_report_onset_at(const twinsep_sieve_report* report, size_t i,
                                             twinsep_onset* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const auto& onsets = report->value.max_separation_onsets;
    if (i >= onsets.size()) fail(ErrorKind::invalid_input, "index out of range");
    *out = {onsets[i].separation, onsets[i].n};
  });
}

twinsep_status twinsep_sieve_report_counts(const twinsep_sieve_report* report,
                                           twinsep_count_table** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    CountTable table;
    table.rows = report->value.counts;
    table.source = CountSource::sieved;
    table.metadata["log_base"] = "natural";
    table.metadata["discarded_twin"] = "3-5";
    table.metadata["onset_n"] = "lower_member_of_closing_twin";
    *out = new twinsep_count_table{std::move(table)};
  });
}

twinsep_status twinsep_adjusted_pi1(const twinsep_count_record* record, uint64_t last_twin_upper,
                                    uint64_t trailing_singletons, uint64_t* out) {
  return guarded([&] {
    require(record, "record");
    require(out, "out");
    *out = adjusted_pi1(from_c(*record), last_twin_upper, trailing_singletons);
  });
}

twinsep_status twinsep_max_gap_onsets(const uint32_t* separations, size_t n,
                                      const uint64_t* positions, size_t n_positions,
                                      twinsep_onset* out, size_t capacity, size_t* len) {
  return guarded([&] {
    if (n != 0) require(separations, "separations");
    if (n_positions != 0) require(positions, "positions");
    const auto onsets = max_gap_onsets({separations, n}, {positions, n_positions});
    std::vector<twinsep_onset> c;
    c.reserve(onsets.size());
    for (const Onset& o : onsets) c.push_back({o.separation, o.n});
    copy_out(c, out, capacity, len);
  });
}

twinsep_status twinsep_write_separations(const char* path, const uint32_t* separations,
                                         size_t n) {
  return guarded([&] {
    require(path, "path");
    if (n != 0) require(separations, "separations");
    write_separations_bin(path, {separations, n});
  });
}

twinsep_status twinsep_read_separations(const char* path, uint32_t** out, size_t* len) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    require(len, "len");
    const auto seps = read_separations_bin(path);
    *out = copy_to_malloc(seps.data(), seps.size());
    *len = seps.size();
  });
}

twinsep_status twinsep_write_onsets(const char* path, const twinsep_onset* onsets, size_t n) {
  return guarded([&] {
    require(path, "path");
    if (n != 0) require(onsets, "onsets");
    std::vector<Onset> v;
    v.reserve(n);
    for (size_t i = 0; i < n; ++i) v.push_back({onsets[i].separation, onsets[i].n});
    write_onsets_csv(path, v, {{"onset_n", "lower_member_of_closing_twin"}});
  });
}

twinsep_status twinsep_read_onsets(const char* path, twinsep_onset** out, size_t* len) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    require(len, "len");
    const auto onsets = read_onsets_csv(path);
    std::vector<twinsep_onset> c;
    c.reserve(onsets.size());
    for (const Onset& o : onsets) c.push_back({o.separation, o.n});
    *out = copy_to_malloc(c.data(), c.size());
    *len = c.size();
  });
}

twinsep_status twinsep_count_table_load(const char* path, twinsep_count_table** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new twinsep_count_table{ingest_counts(path)};
  });
}

twinsep_status twinsep_count_table_save(const twinsep_count_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    write_counts_csv(std::filesystem::path(path), table->value);
  });
}

twinsep_status twinsep_count_table_set_metadata(twinsep_count_table* table, const char* key,
                                                const char* value) {
  return guarded([&] {
    require(table, "table");
    require(key, "key");
    require(value, "value");
    const std::string k = key;
    const std::string v = value;
    if (k.find_first_of(",=\n") != std::string::npos || v.find_first_of(",\n") != std::string::npos) {
      fail(ErrorKind::invalid_input, "metadata may not contain ',', '=' in keys, or newlines");
    }
    table->value.metadata[k] = v;
  });
}

size_t twinsep_count_table_len(const twinsep_count_table* table) {
  return table == nullptr ? 0 : table->value.rows.size();
}

twinsep_status twinsep_count_table_at(const twinsep_count_table* table, size_t i,
                                      twinsep_count_record* out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    if (i >= table->value.rows.size()) fail(ErrorKind::invalid_input, "index out of range");
    *out = to_c(table->value.rows[i]);
  });
}

int twinsep_count_table_is_sieved(const twinsep_count_table* table) {
  return table != nullptr && table->value.source == CountSource::sieved ? 1 : 0;
}

void twinsep_count_table_free(twinsep_count_table* table) { delete table; }

twinsep_status twinsep_spectrum_from_separations(const uint32_t* separations, size_t n,
                                                 twinsep_spectrum** out) {
  return guarded([&] {
    if (n != 0) require(separations, "separations");
    require(out, "out");
    *out = new twinsep_spectrum{accumulate({separations, n})};
  });
}

twinsep_status twinsep_spectrum_load(const char* path, twinsep_spectrum** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new twinsep_spectrum{read_spectrum_csv(std::filesystem::path(path))};
  });
}

twinsep_status twinsep_spectrum_save(const twinsep_spectrum* spectrum, const char* path,
                                     const char* metadata) {
  return guarded([&] {
    require(spectrum, "spectrum");
    require(path, "path");
    Metadata meta;
    if (metadata != nullptr) meta = parse_metadata_line(std::string("# metadata: ") + metadata);
    write_spectrum_csv(std::filesystem::path(path), spectrum->value, meta);
  });
}

twinsep_status twinsep_spectrum_merge(const twinsep_spectrum* a, const twinsep_spectrum* b,
                                      twinsep_spectrum** out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = new twinsep_spectrum{merge(a->value, b->value)};
  });
}

void twinsep_spectrum_totals(const twinsep_spectrum* spectrum, uint64_t* intervals,
                             uint64_t* singletons) {
  if (intervals != nullptr) *intervals = spectrum ? spectrum->value.total_intervals() : 0;
  if (singletons != nullptr) *singletons = spectrum ? spectrum->value.total_singletons() : 0;
}

size_t twinsep_spectrum_bin_len(const twinsep_spectrum* spectrum) {
  return spectrum == nullptr ? 0 : spectrum->value.bins().size();
}

twinsep_status twinsep_spectrum_bin_at(const twinsep_spectrum* spectrum, size_t i,
                                       uint32_t* separation, uint64_t* count) {
  return guarded([&] {
    require(spectrum, "spectrum");
    const auto& bins = spectrum->value.bins();
    if (i >= bins.size()) fail(ErrorKind::invalid_input, "index out of range");
    auto it = bins.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(i));
    if (separation != nullptr) *separation = it->first;
    if (count != nullptr) *count = it->second;
  });
}

void twinsep_spectrum_free(twinsep_spectrum* spectrum) { delete spectrum; }

twinsep_status twinsep_s0_from_counts(const twinsep_count_record* record,
                                      twinsep_s0_convention convention,
                                      const twinsep_spectrum* spectrum, double* out) {
  return guarded([&] {
    require(record, "record");
    require(out, "out");
    *out = s0_from_counts(from_c(*record), from_c(convention),
                          spectrum ? &spectrum->value : nullptr)
               .value;
  });
}

twinsep_status twinsep_solve_f0(double s0, twinsep_model_params* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(solve_f0(s0));
  });
}

twinsep_status twinsep_solve_approx(double s0, uint64_t pi2, double f, twinsep_model_params* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(solve_approx(SolverInput{s0, pi2, f}));
  });
}

twinsep_status twinsep_solve_exact(double s0, uint64_t pi2, double f, double tol,
                                   twinsep_model_params* out) {
  return guarded([&] {
    require(out, "out");
    ExactOptions opts;
    if (tol > 0) opts.tol = tol;
    *out = to_c(solve_exact(SolverInput{s0, pi2, f}, opts));
  });
}

twinsep_status twinsep_system_residuals(const twinsep_model_params* params, double s0,
                                        uint64_t pi2, double out[3]) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    const SystemResiduals r = system_residuals(from_c(*params), s0, pi2);
    out[0] = r.scale;
    out[1] = r.normalization;
    out[2] = r.mean;
  });
}

double twinsep_eval_pmf(const twinsep_model_params* params, int64_t s) {
  return params == nullptr ? 0.0 : eval_pmf(from_c(*params), s);
}

twinsep_status twinsep_predict(const twinsep_count_record* record, double f,
                               twinsep_s0_convention convention, double* s0,
                               twinsep_model_params* out) {
  return guarded([&] {
    require(record, "record");
    require(out, "out");
    const Prediction p = predict(from_c(*record), f, from_c(convention));
    if (s0 != nullptr) *s0 = p.s0;
    *out = to_c(p.params);
  });
}

twinsep_status twinsep_fit_points(twinsep_fit_kind kind, const double* pi1, const double* values,
                                  size_t n, twinsep_fit** out) {
  return guarded([&] {
    require(out, "out");
    if (n != 0) {
      require(pi1, "pi1");
      require(values, "values");
    }
    std::vector<FitPoint> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {pi1[i], values[i]};
    switch (kind) {
      case TWINSEP_FIT_M0: *out = new twinsep_fit{fit_m0(pts)}; return;
      case TWINSEP_FIT_S0_LINEAR: *out = new twinsep_fit{fit_s0_linear(pts)}; return;
      case TWINSEP_FIT_S0_LOGLOG: *out = new twinsep_fit{fit_s0_loglog(pts)}; return;
      case TWINSEP_FIT_EXP_SLOPE: break;
    }
    fail(ErrorKind::invalid_input, "slope fits take a spectrum, not points");
  });
}

twinsep_status twinsep_fit_spectrum_slope(const twinsep_spectrum* spectrum, twinsep_fit** out) {
  return guarded([&] {
    require(spectrum, "spectrum");
    require(out, "out");
    *out = new twinsep_fit{fit_exp_slope(spectrum->value)};
  });
}

twinsep_fit_kind twinsep_fit_model(const twinsep_fit* fit) {
  return fit == nullptr ? TWINSEP_FIT_EXP_SLOPE : to_c(fit->value.model);
}

size_t twinsep_fit_coefficient_len(const twinsep_fit* fit) {
  return fit == nullptr ? 0 : fit->value.coefficients.size();
}

twinsep_status twinsep_fit_coefficient(const twinsep_fit* fit, size_t i, double* value,
                                       double* std_error) {
  return guarded([&] {
    require(fit, "fit");
    if (i >= fit->value.coefficients.size()) fail(ErrorKind::invalid_input, "index out of range");
    if (value != nullptr) *value = fit->value.coefficients[i];
    if (std_error != nullptr) *std_error = fit->value.std_errors[i];
  });
}

void twinsep_fit_summary(const twinsep_fit* fit, double* residual_rms, size_t* n_points,
                         int* ill_conditioned, double* condition_number) {
  if (fit == nullptr) return;
  if (residual_rms != nullptr) *residual_rms = fit->value.residual_rms;
  if (n_points != nullptr) *n_points = fit->value.n_points;
  if (ill_conditioned != nullptr) *ill_conditioned = fit->value.ill_conditioned ? 1 : 0;
  if (condition_number != nullptr) *condition_number = fit->value.condition_number;
}

size_t twinsep_fit_range_deltas(const twinsep_fit* fit, double* out, size_t capacity) {
  if (fit == nullptr || !fit->value.range_deltas) return 0;
  const auto& d = *fit->value.range_deltas;
  if (out != nullptr) std::copy_n(d.begin(), std::min(capacity, d.size()), out);
  return d.size();
}

void twinsep_fit_free(twinsep_fit* fit) { delete fit; }

const char* twinsep_generator_name(void) { return Xoshiro256::kName; }

twinsep_status twinsep_sample_separations(const twinsep_model_params* params, uint64_t n,
                                          uint64_t seed, uint32_t* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    const auto draws = sample_separations(SimConfig{from_c(*params), n, seed});
    std::copy(draws.begin(), draws.end(), out);
  });
}

twinsep_status twinsep_gof_compare(const twinsep_spectrum* empirical,
                                   const twinsep_model_params* params, double alpha,
                                   twinsep_gof_report* out) {
  return guarded([&] {
    require(empirical, "empirical");
    require(params, "params");
    require(out, "out");
    GofOptions opts;
    opts.alpha = alpha;
    const GofReport r = gof_compare(empirical->value, from_c(*params), opts);
    *out = {r.chi2, r.dof, r.critical_value, r.ks_distance, r.alpha, r.pass ? 1 : 0};
  });
}

twinsep_status twinsep_figures_run(const twinsep_count_table* table, const uint32_t* separations,
                                   size_t n_separations, const twinsep_onset* onsets,
                                   size_t n_onsets, double f, twinsep_s0_convention convention,
                                   twinsep_figures** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    std::vector<SeparationSpectrum> spectra;
    if (separations != nullptr) {
      spectra = spectra_at_checkpoints(table->value.rows, {separations, n_separations});
    }
    std::vector<Onset> ons;
    for (size_t i = 0; onsets != nullptr && i < n_onsets; ++i) {
      ons.push_back({onsets[i].separation, onsets[i].n});
    }
    FigureInputs in;
    in.rows = table->value.rows;
    in.spectra = spectra;
    in.onsets = ons;
    in.f = f;
    in.convention = from_c(convention);
    auto figs = std::make_unique<twinsep_figures>();
    figs->value = figure_pipeline(in);
    figs->metadata = table->value.metadata;
    figs->metadata["log_base"] = "natural";
    figs->metadata["s0_convention"] = std::string(to_string(in.convention));
    figs->metadata["f"] = std::to_string(f);
    figs->metadata["skipped_rows"] = std::to_string(figs->value.skipped_rows);
    *out = figs.release();
  });
}

twinsep_status twinsep_figures_write(const twinsep_figures* figures, const char* directory) {
  return guarded([&] {
    require(figures, "figures");
    require(directory, "directory");
    const std::filesystem::path dir(directory);
    if (!std::filesystem::is_directory(dir)) {
      fail(ErrorKind::io, "'" + dir.string() + "' is not a directory");
    }
    write_figure_csv(dir / "fig1.csv", figures->value.fig1, figures->metadata);
    write_figure_csv(dir / "fig2.csv", figures->value.fig2, figures->metadata);
    write_figure_csv(dir / "fig3.csv", figures->value.fig3, figures->metadata);
  });
}

size_t twinsep_figures_series_len(const twinsep_figures* figures, int figure, const char* series) {
  if (figures == nullptr || series == nullptr) return 0;
  switch (figure) {
    case 1: return figures->value.fig1.count(series);
    case 2: return figures->value.fig2.count(series);
    case 3: return figures->value.fig3.count(series);
    default: return 0;
  }
}

twinsep_status twinsep_figures_fit(const twinsep_figures* figures, twinsep_fit_kind which,
                                   twinsep_fit** out) {
  return guarded([&] {
    require(figures, "figures");
    require(out, "out");
    *out = nullptr;
    const std::optional<FitResult>* fit = nullptr;
    if (which == TWINSEP_FIT_M0) fit = &figures->value.m0_fit;
    if (which == TWINSEP_FIT_S0_LINEAR) fit = &figures->value.s0_fit;
    if (fit == nullptr) fail(ErrorKind::invalid_input, "figures carry only m0 and s0 linear fits");
    if (fit->has_value()) *out = new twinsep_fit{**fit};
  });
}

void twinsep_figures_free(twinsep_figures* figures) { delete figures; }

}  // extern "C"
