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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "twinsep/error.hpp"
#include "twinsep/fit.hpp"
#include "twinsep/model.hpp"
#include "twinsep/montecarlo.hpp"
#include "twinsep/pipeline.hpp"
#include "twinsep/sieve.hpp"
#include "twinsep/spectrum.hpp"

using namespace twinsep;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1: sieve exactness on random intervals --------------------------------

Outcome sieve_exactness() {
  constexpr std::uint64_t kMax = 1000000;
  const auto t0 = Clock::now();
  const auto is_prime = oracle::trial_division_table(kMax);
  const auto full = oracle::separations(is_prime, kMax);

  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<std::uint64_t> lo_dist(2, kMax);
  std::uniform_real_distribution<double> log_len(0.0, std::log(double(kMax)));
  const std::uint64_t segments[] = {1024, 4096, 65536, SieveConfig::kDefaultSegment};

  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t lo = lo_dist(rng);
    const auto len = static_cast<std::uint64_t>(std::exp(log_len(rng)));
    const std::uint64_t hi = std::min(kMax, lo + len);

    // Oracle: direct scan of [lo, hi].
    std::uint64_t want_pi1 = 0, want_pi2 = 0;
    for (std::uint64_t k = lo; k <= hi; ++k) {
      if (!is_prime[k]) continue;
      ++want_pi1;
      if (k + 2 <= hi && is_prime[k + 2]) ++want_pi2;
    }
    std::vector<std::uint32_t> want_seps;
    for (std::size_t j = 0; j + 1 < full.twin_lower.size(); ++j) {
      if (full.twin_lower[j] >= lo && full.twin_lower[j + 1] + 2 <= hi) {
        want_seps.push_back(full.values[j]);
      }
    }

    // Library: interval quantities from checkpoint differences.
    SieveConfig cfg;
    cfg.limit = hi;
    cfg.segment_size = segments[trial % 4];
    cfg.workers = 1 + trial % 3;
    std::vector<std::uint64_t> grid;
    if (lo > 2) grid.push_back(lo - 1);
    if (lo + 1 < hi && lo + 1 != lo - 1) grid.push_back(lo + 1);
    grid.push_back(hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.front() < 2) grid.erase(grid.begin());
    cfg.checkpoint_grid = grid;
    const SieveReport r = sieve_range(cfg);
    auto at = [&](std::uint64_t n) -> CountRecord {
      if (n < 2) return {};
      for (const CountRecord& c : r.counts) {
        if (c.n == n) return c;
      }
      throw std::logic_error("missing checkpoint");
    };
    const CountRecord top = at(hi);
    const std::uint64_t got_pi1 = top.pi1 - at(lo - 1).pi1;
    const std::uint64_t got_pi2 = lo + 1 < hi ? top.pi2 - at(lo + 1).pi2 : 0;
    std::vector<std::uint32_t> got_seps;
    if (top.pi2 >= 2) {
      const std::uint64_t before = lo + 1 < hi ? at(lo + 1).pi2 : top.pi2;
      const std::uint64_t first = before >= 1 ? before - 1 : 0;  // (3,5) is not counted
      for (std::uint64_t j = first; j + 2 < top.pi2; ++j) got_seps.push_back(r.separations[j]);
    }
    if (got_pi1 != want_pi1 || got_pi2 != want_pi2 || got_seps != want_seps) {
      if (mismatches == 0) {
        std::printf("  first mismatch on [%llu, %llu]: pi1 %llu/%llu pi2 %llu/%llu seps %zu/%zu\n",
                    (unsigned long long)lo, (unsigned long long)hi, (unsigned long long)got_pi1,
                    (unsigned long long)want_pi1, (unsigned long long)got_pi2,
                    (unsigned long long)want_pi2, got_seps.size(), want_seps.size());
      }
      ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0,
          fmt("200 intervals, %d mismatches, %.1f s", mismatches, secs)};
}

// ---- 2: closed-form identities ---------------------------------------------

Outcome closed_forms() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> s0_dist(0.1, 1000.0);
  std::uniform_real_distribution<double> log_pi2(std::log(10.0), std::log(1e10));
  double worst_mass = 0.0, worst_mean = 0.0, worst_resid = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s0 = s0_dist(rng);
    const auto p = solve_f0(s0);
    const double one_minus_q = -std::expm1(-1.0 / p.sbar);
    worst_mass = std::max(worst_mass, std::abs(p.a / one_minus_q - 1.0));
    worst_mean = std::max(worst_mean, std::abs(p.a * p.q / (one_minus_q * one_minus_q) - s0));

    const auto pi2 = static_cast<std::uint64_t>(std::exp(log_pi2(rng)));
    const auto e = solve_exact({s0, pi2, 1.0});
    worst_resid = std::max(worst_resid, system_residuals(e, s0, pi2).max_abs());
  }
  return {worst_mass <= 1e-12 && worst_mean <= 1e-12 && worst_resid < 1e-10,
          fmt("max |mass-1| %.2e, max |mean-s0| %.2e, max exact residual %.2e", worst_mass,
              worst_mean, worst_resid)};
}

// ---- 3-6: desk-scale sieve to 1e9 ------------------------------------------

struct DeskRun {
  std::vector<CountRecord> rows;
  std::vector<SeparationSpectrum> spectra;
  std::vector<std::uint32_t> separations;
  std::vector<Onset> onsets;
  double seconds = 0.0;
};

DeskRun desk_run() {
  const auto t0 = Clock::now();
  SieveConfig cfg;
  cfg.limit = 1000000000;
  cfg.workers = 0;
  for (std::uint64_t n : geometric_grid(cfg.limit, 20)) {
    if (n >= 100000) cfg.checkpoint_grid.push_back(n);
  }
  // Extra checkpoints for the hypothesis test.
  for (std::uint64_t n : {1000000ull, 10000000ull, 100000000ull}) cfg.checkpoint_grid.push_back(n);
  std::sort(cfg.checkpoint_grid.begin(), cfg.checkpoint_grid.end());
  cfg.checkpoint_grid.erase(std::unique(cfg.checkpoint_grid.begin(), cfg.checkpoint_grid.end()),
                            cfg.checkpoint_grid.end());
  SieveReport r = sieve_range(cfg);
  if (r.counts.back().pi1 != 50847534 || r.counts.back().pi2 != 3424506) {
    throw std::runtime_error("counts at 1e9 disagree with pi(1e9) = 50847534, pi2 = 3424506");
  }
  DeskRun out;
  out.spectra = spectra_at_checkpoints(r.counts, r.separations);
  out.rows = std::move(r.counts);
  out.separations = std::move(r.separations);
  out.onsets = std::move(r.max_separation_onsets);
  out.seconds = seconds_since(t0);
  return out;
}

Outcome desk_m0(const DeskRun& run) {
  std::vector<FitPoint> pts;
  for (const auto& st : checkpoint_stats(run.rows, run.spectra, 1.0, S0Convention::raw)) {
    if (st.slope) pts.push_back({double(st.record.pi1), -st.slope->coefficients[1]});
  }
  const FitResult m0 = fit_m0(pts);
  const double v = m0.coefficients[0];
  const double rel = std::abs(v - 1.321) / 1.321;
  return {rel <= 0.10 && run.seconds < 1800.0,
          fmt("m0 = %.4f +- %.4f over %zu checkpoints (%.1f%% from 1.321), sieve+spectra %.0f s",
              v, m0.std_errors[0], pts.size(), 100 * rel, run.seconds)};
}

Outcome desk_s1(const DeskRun& run) {
  std::vector<FitPoint> pts;
  for (const CountRecord& r : run.rows) {
    pts.push_back({double(r.pi1), s0_from_counts(r, S0Convention::raw).value});
  }
  const FitResult fit = fit_s0_linear(pts);
  const double s1 = fit.coefficients[1];
  const double rel = std::abs(s1 - 0.7918) / 0.7918;
  return {rel <= 0.05 && fit.coefficients[0] < 0,
          fmt("S1 = %.4f (%.1f%% from 0.7918), S0 = %.4f", s1, 100 * rel, fit.coefficients[0])};
}

Outcome cutoff_consistency(const DeskRun& run) {
  int violations = 0;
  int checked = 0;
  double worst_excess = -1e300;
  std::uint64_t worst_n = 0;
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    const CountRecord& r = run.rows[i];
    if (r.n < 100000) continue;
    ++checked;
    const double l = predict_lmax(r, 1.0);
    const double observed = run.spectra[i].max_separation();
    const double excess = observed - (std::ceil(l) + 1.0);
    if (excess > 0) ++violations;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_n = r.n;
    }
  }
  const double l_final = predict_lmax(run.rows.back(), 1.0);
  const auto exceed = std::count_if(run.separations.begin(), run.separations.end(),
                                    [&](std::uint32_t s) { return s > l_final; });
  return {violations == 0 && exceed <= 3,
          fmt("running max above ceil(L)+1 at %d of %d checkpoints (worst +%.0f at N=%llu); "
              "%ld events exceed L(1e9) = %.2f",
              violations, checked, worst_excess, (unsigned long long)worst_n, long(exceed),
              l_final)};
}

Outcome hypothesis_test(const DeskRun& run) {
  std::string detail;
  bool pass = true;
  for (std::uint64_t n : {1000000ull, 10000000ull, 100000000ull}) {
    std::size_t i = 0;
    while (run.rows[i].n != n) ++i;
    const SeparationSpectrum& sp = run.spectra[i];
    const double s0 = s0_from_counts(run.rows[i], S0Convention::interval_exact, &sp).value;
    const GofReport g = gof_compare(sp, solve_f0(s0));
    pass = pass && g.ks_distance < 0.02;
    detail += fmt("%sN=%.0e KS %.4f", detail.empty() ? "" : ", ", double(n), g.ks_distance);
  }
  return {pass, detail};
}

// ---- 7: regression recovery ------------------------------------------------

Outcome regression_recovery() {
  double worst = 0.0;
  auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

  SeparationSpectrum sp;
  for (std::uint32_t s = 0; s <= 30; ++s) sp.add(s, std::uint64_t{1} << (40 - s));
  const FitResult slope = fit_exp_slope(sp);
  track(slope.coefficients[1], -std::log(2.0));
  track(slope.coefficients[0], 40 * std::log(2.0));

  std::vector<FitPoint> m_pts, lin_pts, ll_pts, nested_pts;
  for (double lp = 5.0; lp <= 26.0; lp += 0.5) {
    const double pi1 = std::exp(lp);
    m_pts.push_back({pi1, 1.321 / lp});
    lin_pts.push_back({pi1, -1.194 + 0.7918 * lp});
    ll_pts.push_back({pi1, -3.55 + 0.745 * lp + 1.10 * std::log(lp)});
  }
  track(fit_m0(m_pts).coefficients[0], 1.321);
  const FitResult lin = fit_s0_linear(lin_pts);
  track(lin.coefficients[0], -1.194);
  track(lin.coefficients[1], 0.7918);
  const FitResult ll = fit_s0_loglog(ll_pts);
  track(ll.coefficients[0], -3.55);
  track(ll.coefficients[1], 0.745);
  track(ll.coefficients[2], 1.10);

  // Nested model: data without a log-log term fits S2 -> 0, and pinning S2
  // reproduces the two-parameter fit.
  const FitResult free = fit_s0_loglog(lin_pts);
  const FitResult pinned = fit_s0_loglog(lin_pts, LoglogOptions{true});
  const double nested = std::max({std::abs(free.coefficients[2]),
                                  std::abs(pinned.coefficients[0] - lin.coefficients[0]),
                                  std::abs(pinned.coefficients[1] - lin.coefficients[1])});
  return {worst <= 1e-6 && nested <= 1e-6,
          fmt("max coefficient error %.2e, nested check %.2e", worst, nested)};
}

// ---- 8: Monte Carlo self-consistency ---------------------------------------

Outcome monte_carlo() {
  const ModelParams p = solve_exact({10.0, 100000, 1.0});
  int passed = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto draws = sample_separations({p, 100000, seed});
    passed += gof_compare(accumulate(draws), p, GofOptions{0.01}).pass ? 1 : 0;
  }
  return {passed >= 95, fmt("%d/100 seeds pass at alpha = 0.01", passed)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "sieve exactness", sieve_exactness);
  report(2, "closed-form identities", closed_forms);

  DeskRun run;
  bool have_run = false;
  try {
    run = desk_run();
    have_run = true;
  } catch (const std::exception& e) {
    std::printf("desk-scale sieve failed: %s\n", e.what());
  }
  auto needs_run = [&](Outcome (*fn)(const DeskRun&)) {
    return [&, fn]() -> Outcome {
      if (!have_run) return {false, "desk-scale sieve unavailable"};
      return fn(run);
    };
  };
  report(3, "desk-scale m0", needs_run(desk_m0));
  report(4, "desk-scale S1", needs_run(desk_s1));
  report(5, "cutoff consistency", needs_run(cutoff_consistency));
  report(6, "hypothesis test", needs_run(hypothesis_test));
  report(7, "regression recovery", regression_recovery);
  report(8, "Monte Carlo self-consistency", monte_carlo);

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
