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

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "twinsep/spectrum.hpp"

namespace twinsep {

enum class FitModel { exp_slope, m0_law, s0_linear, s0_loglog };

std::string_view to_string(FitModel m);

// Coefficients are ordered intercept first:
//   exp_slope  [ln(A * total), -m]        over nonzero bins of ln(count) vs s
//   m0_law     [m0]                        m = m0 / ln(pi1)
//   s0_linear  [S0, S1]                    s0 = S0 + S1 ln(pi1)
//   s0_loglog  [S0, S1, S2]                s0 = S0 + S1 ln(pi1) + S2 ln(ln(pi1))
// std_errors are zero when there are no residual degrees of freedom.
struct FitResult {
  FitModel model = FitModel::s0_linear;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  double residual_rms = 0.0;
  std::size_t n_points = 0;
  // Set when the design matrix is close to rank deficient.
  bool ill_conditioned = false;
  double condition_number = 1.0;
  // s0_loglog only: coefficients refit on the upper half of the ln(pi1)
  // range minus the full-range coefficients.
  std::optional<std::vector<double>> range_deltas;
};

struct FitPoint {
  double pi1 = 0.0;
  double value = 0.0;
};

struct OlsResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd residuals;
  double residual_rms = 0.0;
  double condition_number = 1.0;
};

// Equal-weight least squares. Throws singular_fit when the design is rank
// deficient.
OlsResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

FitResult fit_exp_slope(const SeparationSpectrum& spectrum);

FitResult fit_m0(std::span<const FitPoint> points);

FitResult fit_s0_linear(std::span<const FitPoint> points);

struct LoglogOptions {
  // Pin S2 to zero; the result then matches fit_s0_linear.
  bool constrain_s2_zero = false;
  // Condition number (of the column-normalized design) above which the
  // result is flagged ill-conditioned.
  double condition_warning = 1e8;
};

FitResult fit_s0_loglog(std::span<const FitPoint> points, const LoglogOptions& opts = {});

}  // namespace twinsep
