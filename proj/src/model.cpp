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

#include "twinsep/model.hpp"

#include <string>

#include "twinsep/error.hpp"
#include "twinsep/root_find.hpp"

namespace twinsep {

void validate(const SolverInput& in) {
  if (!(in.s0 > 0) || !std::isfinite(in.s0)) {
    fail(ErrorKind::domain, "s0 must be positive and finite");
  }
  if (in.pi2 < 3) fail(ErrorKind::domain, "pi2 must be >= 3");
  if (!(in.f >= 0) || !std::isfinite(in.f)) {
    fail(ErrorKind::domain, "risk factor must be >= 0");
  }
  if (in.f >= static_cast<double>(in.pi2)) {
    fail(ErrorKind::domain, "risk factor outside the model regime (need f < pi2, got f=" +
                                std::to_string(in.f) + ", pi2=" + std::to_string(in.pi2) + ")");
  }
}

ModelParams solve_f0(double s0) {
  if (!(s0 > 0) || !std::isfinite(s0)) {
    fail(ErrorKind::domain, "s0 must be positive and finite");
  }
  const double rate = std::log1p(1.0 / s0);
  ModelParams p;
  p.sbar = 1.0 / rate;
  p.a = 1.0 / (1.0 + s0);
  p.q = s0 / (1.0 + s0);
  p.l_cut.reset();
  p.f = 0.0;
  return p;
}

ModelParams solve_approx(const SolverInput& in) {
  validate(in);
  if (in.f == 0) return solve_f0(in.s0);
  const auto pi2 = static_cast<double>(in.pi2);
  ModelParams p = solve_f0(in.s0);
  p.a = (1.0 + in.f / pi2) / (1.0 + in.s0);
  p.l_cut = -1.0 + std::log1p(pi2 / in.f) / std::log1p(1.0 / in.s0);
  p.f = in.f;
  return p;
}

ModelParams solve_exact(const SolverInput& in, const ExactOptions& opts) {
  validate(in);
  if (in.f == 0) return solve_f0(in.s0);
  if (!(opts.tol > 0)) fail(ErrorKind::domain, "tolerance must be positive");

  const auto pi2 = static_cast<double>(in.pi2);
  const double tail = in.f / pi2;
  const double log_ratio = std::log1p(pi2 / in.f);  // (L+1) t
  const auto reduced = [&](double t) {
    return 1.0 / std::expm1(t) - log_ratio * tail / t - in.s0;
  };

  // At the approximate rate the dropped term makes the function negative;
  // it tends to +inf as t -> 0 because tail * log_ratio < 1 whenever f < pi2.
  const double hi = std::log1p(1.0 / in.s0);
  double lo = 0.5 * hi;
  int halvings = 0;
  while (reduced(lo) <= 0) {
    lo *= 0.5;
    if (++halvings > 1000 || lo == 0) {
      fail(ErrorKind::no_solution, "no bracket for the decay rate");
    }
  }
  const RootResult root = find_root_bracketed(
      reduced, lo, hi, RootOptions{opts.tol, 0.0, opts.max_iterations});

  const double t = root.x;
  ModelParams p;
  p.sbar = 1.0 / t;
  p.q = std::exp(-t);
  p.a = (1.0 + tail) * -std::expm1(-t);
  p.l_cut = log_ratio / t - 1.0;
  p.f = in.f;
  return p;
}

SystemResiduals system_residuals(const ModelParams& p, double s0, std::uint64_t pi2) {
  const double rate = 1.0 / p.sbar;
  const double one_minus_q = -std::expm1(-rate);
  const double tail = p.f / static_cast<double>(pi2);
  const double scale = p.a / one_minus_q;
  SystemResiduals r;
  r.scale = scale - (1.0 + tail);
  if (p.bounded()) {
    const double q_pow = std::exp(-(*p.l_cut + 1.0) * rate);
    r.normalization = scale * (1.0 - q_pow) - 1.0;
    r.mean = 1.0 / std::expm1(rate) - (*p.l_cut + 1.0) * tail - s0;
  } else {
    r.normalization = scale - 1.0;
    r.mean = 1.0 / std::expm1(rate) - s0;
  }
  return r;
}

double eval_pmf(const ModelParams& p, std::int64_t s) {
  if (s < 0) return 0.0;
  if (p.bounded() && static_cast<double>(s) > *p.l_cut) return 0.0;
  return p.a * std::exp(-static_cast<double>(s) / p.sbar);
}

Prediction predict(const CountRecord& record, double f, S0Convention convention,
                   const SeparationSpectrum* spectrum) {
  if (!(f > 0)) fail(ErrorKind::domain, "prediction needs a positive risk factor");
  Prediction out;
  out.s0 = s0_from_counts(record, convention, spectrum).value;
  out.params = solve_approx(SolverInput{out.s0, record.pi2, f});
  return out;
}

double predict_lmax(const CountRecord& record, double f, S0Convention convention) {
  return *predict(record, f, convention).params.l_cut;
}

}  // namespace twinsep
