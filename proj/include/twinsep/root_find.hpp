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

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "twinsep/error.hpp"

namespace twinsep {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

struct RootOptions {
  double f_tol = 1e-12;  // stop once |f(x)| <= f_tol
  double x_tol = 0.0;    // stop once the bracket is narrower; 0 = machine precision
  int max_iterations = 200;
};

// Bisection safeguarded secant search on [lo, hi], which must bracket a sign
// change. Each step takes the secant point when it falls strictly inside the
// bracket and the previous step shrank the bracket by at least half;
// otherwise it bisects.
template <class F>
RootResult find_root_bracketed(F&& f, double lo, double hi, const RootOptions& opts = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return {lo, flo, 0};
  if (fhi == 0) return {hi, fhi, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    fail(ErrorKind::no_solution, "interval does not bracket a root");
  }
  double prev_width = std::abs(hi - lo);
  bool last_was_secant = false;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    double x = 0.5 * (lo + hi);
    const double width = std::abs(hi - lo);
    if (!(last_was_secant && width > 0.5 * prev_width)) {
      const double sec = hi - fhi * (hi - lo) / (fhi - flo);
      if (std::isfinite(sec) && sec > std::min(lo, hi) && sec < std::max(lo, hi)) {
        x = sec;
        last_was_secant = true;
      } else {
        last_was_secant = false;
      }
    } else {
      last_was_secant = false;
    }
    prev_width = width;

    const double fx = f(x);
    if (std::abs(fx) <= opts.f_tol) return {x, fx, it};
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double x_tol =
        std::max(opts.x_tol, 4 * std::numeric_limits<double>::epsilon() * scale);
    if (std::abs(hi - lo) <= x_tol) {
      return std::abs(flo) < std::abs(fhi) ? RootResult{lo, flo, it} : RootResult{hi, fhi, it};
    }
  }
  fail(ErrorKind::convergence,
       "root search did not converge in " + std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace twinsep
