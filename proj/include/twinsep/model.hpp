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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "twinsep/sieve.hpp"
#include "twinsep/spectrum.hpp"

namespace twinsep {

// Parameters of the truncated geometric separation law P(s) = a q^s,
// q = exp(-1/sbar), for 0 <= s <= l_cut.
struct ModelParams {
  double a = 1.0;
  double sbar = 1.0;
  double q = std::exp(-1.0);
  // Absent means no cutoff (f = 0).
  std::optional<double> l_cut;
  double f = 0.0;

  bool bounded() const { return l_cut.has_value(); }
  // Largest admitted integer separation; only meaningful when bounded().
  std::int64_t l_floor() const { return static_cast<std::int64_t>(std::floor(*l_cut)); }
  std::int64_t l_ceil() const { return static_cast<std::int64_t>(std::ceil(*l_cut)); }
};

struct SolverInput {
  double s0 = 0.0;
  std::uint64_t pi2 = 0;
  double f = 1.0;
};

// Throws domain errors for s0 <= 0, pi2 < 3, f < 0 or f >= pi2.
void validate(const SolverInput& in);

// Exact solution without cutoff: 1/sbar = ln(1 + 1/s0), a = 1/(1 + s0).
ModelParams solve_f0(double s0);

// Closed form with the (L+1) f/pi2 term dropped from the mean relation.
// f == 0 falls back to solve_f0.
ModelParams solve_approx(const SolverInput& in);

struct ExactOptions {
  double tol = 1e-12;
  int max_iterations = 200;
};

// Solves the full normalization / tail / mean system. The unknown is the
// decay rate t = 1/sbar; eliminating a and q^(L+1) leaves
//   1/(e^t - 1) - ln(1 + pi2/f) f / (pi2 t) - s0 = 0,
// which is bracketed between a small t and the approximate solution.
ModelParams solve_exact(const SolverInput& in, const ExactOptions& opts = {});

// Residuals of the three relations
//   a/(1-q) = 1 + f/pi2,  a/(1-q) (1 - q^(L+1)) = 1,  q/(1-q) - (L+1) f/pi2 = s0.
struct SystemResiduals {
  double scale = 0.0;
  double normalization = 0.0;
  double mean = 0.0;

  double max_abs() const {
    return std::max({std::abs(scale), std::abs(normalization), std::abs(mean)});
  }
};

SystemResiduals system_residuals(const ModelParams& p, double s0, std::uint64_t pi2);

// a exp(-s/sbar) for s <= l_cut, 0 beyond.
double eval_pmf(const ModelParams& p, std::int64_t s);

struct Prediction {
  double s0 = 0.0;
  ModelParams params;
};

Prediction predict(const CountRecord& record, double f,
                   S0Convention convention = S0Convention::raw,
                   const SeparationSpectrum* spectrum = nullptr);

// Cutoff L at the record's counts for risk factor f > 0.
double predict_lmax(const CountRecord& record, double f,
                    S0Convention convention = S0Convention::raw);

}  // namespace twinsep
