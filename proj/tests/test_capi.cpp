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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "twinsep/twinsep.h"

namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "twinsep_test_capi";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string last_error() { return twinsep_last_error(); }

}  // namespace

TEST_CASE("version and generator") {
  CHECK(std::strlen(twinsep_version()) > 0);
  CHECK(std::string(twinsep_generator_name()) == "xoshiro256**/splitmix64");
}

TEST_CASE("sieve through the C API") {
  size_t len = 0;
  REQUIRE(twinsep_checkpoint_grid("list:10,100", 100, nullptr, 0, &len) == TWINSEP_OK);
  REQUIRE(len == 2);
  std::vector<uint64_t> grid(len);
  REQUIRE(twinsep_checkpoint_grid("list:10,100", 100, grid.data(), grid.size(), &len) ==
          TWINSEP_OK);

  twinsep_sieve_config cfg{100, 0, grid.data(), grid.size(), 1};
  twinsep_sieve_report* report = nullptr;
  REQUIRE(twinsep_sieve_run(&cfg, &report) == TWINSEP_OK);
  REQUIRE(twinsep_sieve_report_count_len(report) == 2);
  twinsep_count_record rec{};
  REQUIRE(twinsep_sieve_report_count_at(report, 1, &rec) == TWINSEP_OK);
  CHECK(rec.n == 100);
  CHECK(rec.pi1 == 25);
  CHECK(rec.pi2 == 8);
  CHECK(twinsep_sieve_report_count_at(report, 7, &rec) == TWINSEP_ERR_VALIDATION);

  size_t n_seps = 0;
  const uint32_t* seps = twinsep_sieve_report_separations(report, &n_seps);
  REQUIRE(n_seps == 6);
  CHECK(std::vector<uint32_t>(seps, seps + n_seps) == std::vector<uint32_t>{0, 0, 1, 1, 2, 1});
  REQUIRE(twinsep_sieve_report_onset_len(report) == 3);
  twinsep_onset onset{};
  REQUIRE(twinsep_sieve_report_onset_at(report, 2, &onset) == TWINSEP_OK);
  CHECK(onset.separation == 2);
  CHECK(onset.n == 59);

  twinsep_count_table* table = nullptr;
  REQUIRE(twinsep_sieve_report_counts(report, &table) == TWINSEP_OK);
  CHECK(twinsep_count_table_is_sieved(table) == 1);
  REQUIRE(twinsep_count_table_set_metadata(table, "limit", "100") == TWINSEP_OK);
  const std::string path = scratch("counts.csv");
  REQUIRE(twinsep_count_table_save(table, path.c_str()) == TWINSEP_OK);
  twinsep_count_table* back = nullptr;
  REQUIRE(twinsep_count_table_load(path.c_str(), &back) == TWINSEP_OK);
  CHECK(twinsep_count_table_len(back) == 2);
  CHECK(twinsep_count_table_is_sieved(back) == 1);

  twinsep_figures* figs = nullptr;
  REQUIRE(twinsep_figures_run(back, seps, n_seps, nullptr, 0, 1.0, TWINSEP_S0_RAW, &figs) ==
          TWINSEP_OK);
  CHECK(twinsep_figures_series_len(figs, 2, "s0") == 1);  // N = 10 has s0 = 0
  twinsep_fit* fit = reinterpret_cast<twinsep_fit*>(1);
  REQUIRE(twinsep_figures_fit(figs, TWINSEP_FIT_S0_LINEAR, &fit) == TWINSEP_OK);
  CHECK(fit == nullptr);
  const fs::path dir = scratch("figs");
  fs::create_directories(dir);
  REQUIRE(twinsep_figures_write(figs, dir.c_str()) == TWINSEP_OK);
  CHECK(fs::exists(dir / "fig3.csv"));

  twinsep_figures_free(figs);
  twinsep_count_table_free(back);
  twinsep_count_table_free(table);
  twinsep_sieve_report_free(report);
}

TEST_CASE("errors map to status codes") {
  twinsep_sieve_config cfg{1, 0, nullptr, 0, 1};
  twinsep_sieve_report* report = nullptr;
  CHECK(twinsep_sieve_run(&cfg, &report) == TWINSEP_ERR_VALIDATION);
  CHECK(report == nullptr);
  CHECK_FALSE(last_error().empty());

  twinsep_model_params p{};
  CHECK(twinsep_solve_f0(-1.0, &p) == TWINSEP_ERR_VALIDATION);
  CHECK(last_error().rfind("domain-error:", 0) == 0);

  twinsep_count_table* table = nullptr;
  CHECK(twinsep_count_table_load(scratch("does_not_exist.csv").c_str(), &table) == TWINSEP_ERR_IO);

  const double pi1[] = {100.0, 100.0, 100.0};
  const double val[] = {1.0, 2.0, 3.0};
  twinsep_fit* fit = nullptr;
  CHECK(twinsep_fit_points(TWINSEP_FIT_S0_LINEAR, pi1, val, 3, &fit) == TWINSEP_ERR_NUMERICAL);
  CHECK(twinsep_solve_f0(1.0, nullptr) == TWINSEP_ERR_VALIDATION);
}

TEST_CASE("model and fits through the C API") {
  twinsep_model_params p{};
  REQUIRE(twinsep_solve_exact(10.0, 1000, 1.0, 0.0, &p) == TWINSEP_OK);
  CHECK(p.bounded == 1);
  CHECK(std::abs(p.q - 0.9096901699982219) < 1e-10);
  double r[3];
  REQUIRE(twinsep_system_residuals(&p, 10.0, 1000, r) == TWINSEP_OK);
  for (double v : r) CHECK(std::abs(v) < 1e-10);
  CHECK(twinsep_eval_pmf(&p, 1000) == 0.0);

  twinsep_count_record rec{100, 25, 8, 0, 0};
  double s0 = 0.0;
  REQUIRE(twinsep_predict(&rec, 1.0, TWINSEP_S0_RAW, &s0, &p) == TWINSEP_OK);
  CHECK(s0 == 1.125);
  CHECK(p.l_cut == doctest::Approx(2.4548166450612475));

  std::vector<uint32_t> draws(5000);
  REQUIRE(twinsep_solve_f0(1.0, &p) == TWINSEP_OK);
  REQUIRE(twinsep_sample_separations(&p, draws.size(), 3, draws.data()) == TWINSEP_OK);
  twinsep_spectrum* sp = nullptr;
  REQUIRE(twinsep_spectrum_from_separations(draws.data(), draws.size(), &sp) == TWINSEP_OK);
  twinsep_gof_report gof{};
  REQUIRE(twinsep_gof_compare(sp, &p, 0.01, &gof) == TWINSEP_OK);
  CHECK(gof.dof >= 1);
  CHECK(gof.ks_distance < 0.05);

  twinsep_fit* fit = nullptr;
  REQUIRE(twinsep_fit_spectrum_slope(sp, &fit) == TWINSEP_OK);
  CHECK(twinsep_fit_model(fit) == TWINSEP_FIT_EXP_SLOPE);
  double slope = 0.0, se = 0.0;
  REQUIRE(twinsep_fit_coefficient(fit, 1, &slope, &se) == TWINSEP_OK);
  CHECK(std::abs(slope + std::log(2.0)) < 0.1);
  twinsep_fit_free(fit);

  const std::string path = scratch("spectrum.csv");
  REQUIRE(twinsep_spectrum_save(sp, path.c_str(), "kind=test") == TWINSEP_OK);
  twinsep_spectrum* loaded = nullptr;
  REQUIRE(twinsep_spectrum_load(path.c_str(), &loaded) == TWINSEP_OK);
  twinsep_spectrum* merged = nullptr;
  REQUIRE(twinsep_spectrum_merge(sp, loaded, &merged) == TWINSEP_OK);
  uint64_t intervals = 0, singletons = 0;
  twinsep_spectrum_totals(merged, &intervals, &singletons);
  CHECK(intervals == 2 * draws.size());
  twinsep_spectrum_free(merged);
  twinsep_spectrum_free(loaded);
  twinsep_spectrum_free(sp);

  std::vector<double> pi1, val;
  for (double lp = 5.0; lp <= 20.0; lp += 1.0) {
    pi1.push_back(std::exp(lp));
    val.push_back(-3.55 + 0.745 * lp + 1.10 * std::log(lp));
  }
  REQUIRE(twinsep_fit_points(TWINSEP_FIT_S0_LOGLOG, pi1.data(), val.data(), pi1.size(), &fit) ==
          TWINSEP_OK);
  REQUIRE(twinsep_fit_coefficient_len(fit) == 3);
  double c2 = 0.0;
  REQUIRE(twinsep_fit_coefficient(fit, 2, &c2, nullptr) == TWINSEP_OK);
  CHECK(std::abs(c2 - 1.10) < 1e-6);
  double deltas[3];
  CHECK(twinsep_fit_range_deltas(fit, deltas, 3) == 3);
  twinsep_fit_free(fit);
}

TEST_CASE("separation and onset files") {
  const std::vector<uint32_t> seps{0, 3, 1, 7};
  const std::string bin = scratch("seps.bin");
  REQUIRE(twinsep_write_separations(bin.c_str(), seps.data(), seps.size()) == TWINSEP_OK);
  uint32_t* back = nullptr;
  size_t len = 0;
  REQUIRE(twinsep_read_separations(bin.c_str(), &back, &len) == TWINSEP_OK);
  CHECK(std::vector<uint32_t>(back, back + len) == seps);
  twinsep_buffer_free(back);

  const uint64_t positions[] = {5, 11, 29, 41, 71};
  twinsep_onset onsets[4];
  REQUIRE(twinsep_max_gap_onsets(seps.data(), seps.size(), positions, 5, onsets, 4, &len) ==
          TWINSEP_OK);
  REQUIRE(len == 3);
  CHECK(onsets[2].separation == 7);
  CHECK(onsets[2].n == 71);

  const std::string csv = scratch("onsets.csv");
  REQUIRE(twinsep_write_onsets(csv.c_str(), onsets, len) == TWINSEP_OK);
  twinsep_onset* read = nullptr;
  REQUIRE(twinsep_read_onsets(csv.c_str(), &read, &len) == TWINSEP_OK);
  CHECK(len == 3);
  CHECK(read[1].n == 29);
  twinsep_buffer_free(read);

  twinsep_count_record rec{100, 25, 8, 0, 0};
  uint64_t adj = 0;
  REQUIRE(twinsep_adjusted_pi1(&rec, 73, 2, &adj) == TWINSEP_OK);
  CHECK(adj == 21);
}
