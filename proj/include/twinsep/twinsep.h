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

/* C interface to the twinsep library. Every function that can fail returns a
 * twinsep_status; on failure twinsep_last_error() describes the cause. Handles
 * are opaque and owned by the caller, who releases them with the matching
 * *_free function. Status values double as the CLI exit codes. */
#ifndef TWINSEP_TWINSEP_H_
#define TWINSEP_TWINSEP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TWINSEP_BUILDING_LIBRARY)
#define TWINSEP_API __attribute__((visibility("default")))
#else
#define TWINSEP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twinsep_status {
  TWINSEP_OK = 0,
  TWINSEP_ERR_INTERNAL = 1,
  TWINSEP_ERR_VALIDATION = 2,
  TWINSEP_ERR_NUMERICAL = 3,
  TWINSEP_ERR_IO = 4
} twinsep_status;

typedef enum twinsep_s0_convention {
  TWINSEP_S0_RAW = 0,
  TWINSEP_S0_PAPER_OFFSET = 1,
  TWINSEP_S0_INTERVAL_EXACT = 2
} twinsep_s0_convention;

typedef enum twinsep_fit_kind {
  TWINSEP_FIT_EXP_SLOPE = 0,
  TWINSEP_FIT_M0 = 1,
  TWINSEP_FIT_S0_LINEAR = 2,
  TWINSEP_FIT_S0_LOGLOG = 3
} twinsep_fit_kind;

typedef struct twinsep_count_record {
  uint64_t n;
  uint64_t pi1;
  uint64_t pi2;
  int has_pi1_adjusted;
  uint64_t pi1_adjusted;
} twinsep_count_record;

typedef struct twinsep_onset {
  uint32_t separation;
  uint64_t n;
} twinsep_onset;

/* `bounded` is 0 when there is no cutoff; l_cut is then meaningless. */
typedef struct twinsep_model_params {
  double a;
  double sbar;
  double q;
  double l_cut;
  int bounded;
  double f;
} twinsep_model_params;

typedef struct twinsep_sieve_config {
  uint64_t limit;
  uint64_t segment_size; /* 0 selects the default (2^20 flags) */
  const uint64_t* checkpoints;
  size_t n_checkpoints;
  unsigned workers; /* 0 selects the hardware concurrency */
} twinsep_sieve_config;

typedef struct twinsep_gof_report {
  double chi2;
  int dof;
  double critical_value;
  double ks_distance;
  double alpha;
  int pass;
} twinsep_gof_report;

typedef struct twinsep_sieve_report twinsep_sieve_report;
typedef struct twinsep_spectrum twinsep_spectrum;
typedef struct twinsep_count_table twinsep_count_table;
typedef struct twinsep_fit twinsep_fit;
typedef struct twinsep_figures twinsep_figures;

/* Thread-local description of the last failure on this thread. */
TWINSEP_API const char* twinsep_last_error(void);
TWINSEP_API const char* twinsep_version(void);
/* Releases buffers returned through uint32_t** / twinsep_onset** / char**. */
TWINSEP_API void twinsep_buffer_free(void* buffer);

/* ---- sieve ---- */

/* Writes the grid for spec "geometric:<k>" or "list:<a,b,...>". Pass
 * out == NULL to query the length. */
TWINSEP_API twinsep_status twinsep_checkpoint_grid(const char* spec, uint64_t limit,
                                                   uint64_t* out, size_t capacity,
                                                   size_t* len);
TWINSEP_API twinsep_status twinsep_sieve_run(const twinsep_sieve_config* config,
                                             twinsep_sieve_report** out);
TWINSEP_API void twinsep_sieve_report_free(twinsep_sieve_report* report);
TWINSEP_API size_t twinsep_sieve_report_count_len(const twinsep_sieve_report* report);
TWINSEP_API twinsep_status twinsep_sieve_report_count_at(const twinsep_sieve_report* report,
                                                         size_t i, twinsep_count_record* out);
/* Borrowed pointer, valid until the report is freed. */
TWINSEP_API const uint32_t* twinsep_sieve_report_separations(const twinsep_sieve_report* report,
                                                             size_t* len);
TWINSEP_API size_t twinsep_sieve_report_onset_len(const twinsep_sieve_report* report);
TWINSEP_API twinsep_status twinsep_sieve_report_onset_at(const twinsep_sieve_report* report,
                                                         size_t i, twinsep_onset* out);
/* New table (source = sieved) holding the report's checkpoint counts. */
TWINSEP_API twinsep_status twinsep_sieve_report_counts(const twinsep_sieve_report* report,
                                                       twinsep_count_table** out);

TWINSEP_API twinsep_status twinsep_adjusted_pi1(const twinsep_count_record* record,
                                                uint64_t last_twin_upper,
                                                uint64_t trailing_singletons, uint64_t* out);
/* positions[i + 1] is the lower member of the twin closing separations[i]. */
TWINSEP_API twinsep_status twinsep_max_gap_onsets(const uint32_t* separations, size_t n,
                                                  const uint64_t* positions, size_t n_positions,
                                                  twinsep_onset* out, size_t capacity,
                                                  size_t* len);

TWINSEP_API twinsep_status twinsep_write_separations(const char* path,
                                                     const uint32_t* separations, size_t n);
TWINSEP_API twinsep_status twinsep_read_separations(const char* path, uint32_t** out,
                                                    size_t* len);
TWINSEP_API twinsep_status twinsep_write_onsets(const char* path, const twinsep_onset* onsets,
                                                size_t n);
TWINSEP_API twinsep_status twinsep_read_onsets(const char* path, twinsep_onset** out,
                                               size_t* len);

/* ---- count tables ---- */

TWINSEP_API twinsep_status twinsep_count_table_load(const char* path, twinsep_count_table** out);
TWINSEP_API twinsep_status twinsep_count_table_save(const twinsep_count_table* table,
                                                    const char* path);
TWINSEP_API twinsep_status twinsep_count_table_set_metadata(twinsep_count_table* table,
                                                            const char* key, const char* value);
TWINSEP_API size_t twinsep_count_table_len(const twinsep_count_table* table);
TWINSEP_API twinsep_status twinsep_count_table_at(const twinsep_count_table* table, size_t i,
                                                  twinsep_count_record* out);
TWINSEP_API int twinsep_count_table_is_sieved(const twinsep_count_table* table);
TWINSEP_API void twinsep_count_table_free(twinsep_count_table* table);

/* ---- spectra ---- */

TWINSEP_API twinsep_status twinsep_spectrum_from_separations(const uint32_t* separations,
                                                             size_t n, twinsep_spectrum** out);
TWINSEP_API twinsep_status twinsep_spectrum_load(const char* path, twinsep_spectrum** out);
TWINSEP_API twinsep_status twinsep_spectrum_save(const twinsep_spectrum* spectrum,
                                                 const char* path, const char* metadata);
TWINSEP_API twinsep_status twinsep_spectrum_merge(const twinsep_spectrum* a,
                                                  const twinsep_spectrum* b,
                                                  twinsep_spectrum** out);
TWINSEP_API void twinsep_spectrum_totals(const twinsep_spectrum* spectrum, uint64_t* intervals,
                                         uint64_t* singletons);
TWINSEP_API size_t twinsep_spectrum_bin_len(const twinsep_spectrum* spectrum);
TWINSEP_API twinsep_status twinsep_spectrum_bin_at(const twinsep_spectrum* spectrum, size_t i,
                                                   uint32_t* separation, uint64_t* count);
TWINSEP_API void twinsep_spectrum_free(twinsep_spectrum* spectrum);

/* `spectrum` may be NULL; interval-exact then uses pi1_adjusted. */
TWINSEP_API twinsep_status twinsep_s0_from_counts(const twinsep_count_record* record,
                                                  twinsep_s0_convention convention,
                                                  const twinsep_spectrum* spectrum, double* out);

/* ---- model ---- */

TWINSEP_API twinsep_status twinsep_solve_f0(double s0, twinsep_model_params* out);
TWINSEP_API twinsep_status twinsep_solve_approx(double s0, uint64_t pi2, double f,
                                                twinsep_model_params* out);
/* tol <= 0 selects the default 1e-12. */
TWINSEP_API twinsep_status twinsep_solve_exact(double s0, uint64_t pi2, double f, double tol,
                                               twinsep_model_params* out);
/* out[0..2]: scale, normalization and mean relation residuals. */
TWINSEP_API twinsep_status twinsep_system_residuals(const twinsep_model_params* params,
                                                    double s0, uint64_t pi2, double out[3]);
TWINSEP_API double twinsep_eval_pmf(const twinsep_model_params* params, int64_t s);
TWINSEP_API twinsep_status twinsep_predict(const twinsep_count_record* record, double f,
                                           twinsep_s0_convention convention, double* s0,
                                           twinsep_model_params* out);

/* ---- fits ---- */

TWINSEP_API twinsep_status twinsep_fit_points(twinsep_fit_kind kind, const double* pi1,
                                              const double* values, size_t n,
                                              twinsep_fit** out);
TWINSEP_API twinsep_status twinsep_fit_spectrum_slope(const twinsep_spectrum* spectrum,
                                                      twinsep_fit** out);
TWINSEP_API twinsep_fit_kind twinsep_fit_model(const twinsep_fit* fit);
TWINSEP_API size_t twinsep_fit_coefficient_len(const twinsep_fit* fit);
TWINSEP_API twinsep_status twinsep_fit_coefficient(const twinsep_fit* fit, size_t i,
                                                   double* value, double* std_error);
TWINSEP_API void twinsep_fit_summary(const twinsep_fit* fit, double* residual_rms,
                                     size_t* n_points, int* ill_conditioned,
                                     double* condition_number);
/* Returns 0 when no range deltas were computed. */
TWINSEP_API size_t twinsep_fit_range_deltas(const twinsep_fit* fit, double* out,
                                            size_t capacity);
TWINSEP_API void twinsep_fit_free(twinsep_fit* fit);

/* ---- simulation and goodness of fit ---- */

TWINSEP_API const char* twinsep_generator_name(void);
/* Writes n draws into out. */
TWINSEP_API twinsep_status twinsep_sample_separations(const twinsep_model_params* params,
                                                      uint64_t n, uint64_t seed, uint32_t* out);
TWINSEP_API twinsep_status twinsep_gof_compare(const twinsep_spectrum* empirical,
                                               const twinsep_model_params* params, double alpha,
                                               twinsep_gof_report* out);

/* ---- figure datasets ---- */

/* separations and onsets may be NULL. With separations, the cumulative
 * spectrum at each table row is the first pi2 - 2 entries. */
TWINSEP_API twinsep_status twinsep_figures_run(const twinsep_count_table* table,
                                               const uint32_t* separations, size_t n_separations,
                                               const twinsep_onset* onsets, size_t n_onsets,
                                               double f, twinsep_s0_convention convention,
                                               twinsep_figures** out);
/* Writes fig1.csv, fig2.csv and fig3.csv into an existing directory. */
TWINSEP_API twinsep_status twinsep_figures_write(const twinsep_figures* figures,
                                                 const char* directory);
/* figure is 1, 2 or 3. */
TWINSEP_API size_t twinsep_figures_series_len(const twinsep_figures* figures, int figure,
                                              const char* series);
/* which: TWINSEP_FIT_M0 or TWINSEP_FIT_S0_LINEAR. *out is NULL when absent. */
TWINSEP_API twinsep_status twinsep_figures_fit(const twinsep_figures* figures,
                                               twinsep_fit_kind which, twinsep_fit** out);
TWINSEP_API void twinsep_figures_free(twinsep_figures* figures);

#ifdef __cplusplus
}
#endif

#endif /* TWINSEP_TWINSEP_H_ */
