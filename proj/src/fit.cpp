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

#include "twinsep/fit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twinsep/error.hpp"

namespace twinsep {
namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

FitResult from_ols(FitModel model, const OlsResult& r) {
  FitResult out;
  out.model = model;
  out.coefficients = to_vector(r.beta);
  out.std_errors = to_vector(r.std_errors);
  out.residual_rms = r.residual_rms;
  out.n_points = static_cast<std::size_t>(r.residuals.size());
  out.condition_number = r.condition_number;
  return out;
}

double log_pi1(double pi1) {
  if (!(pi1 > 1) || !std::isfinite(pi1)) {
    fail(ErrorKind::domain, "pi1 must exceed 1, got " + std::to_string(pi1));
  }
  return std::log(pi1);
}

Eigen::MatrixXd loglog_design(std::span<const FitPoint> points, bool with_s2) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), with_s2 ? 3 : 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const double l = std::log(points[i].pi1);
    x(row, 0) = 1.0;
    x(row, 1) = l;
    if (with_s2) x(row, 2) = std::log(l);
  }
  return x;
}

Eigen::VectorXd values(std::span<const FitPoint> points) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) y(static_cast<Eigen::Index>(i)) = points[i].value;
  return y;
}

FitResult loglog_core(std::span<const FitPoint> points, const LoglogOptions& opts) {
  if (points.size() < 4) {
    fail(ErrorKind::insufficient_data, "three-parameter fit needs >= 4 points");
  }
  for (const FitPoint& p : points) {
    if (!(p.pi1 > std::numbers::e)) {
      fail(ErrorKind::domain, "ln(ln(pi1)) needs pi1 > e, got " + std::to_string(p.pi1));
    }
  }
  const bool with_s2 = !opts.constrain_s2_zero;
  FitResult out = from_ols(FitModel::s0_loglog, ols(loglog_design(points, with_s2), values(points)));
  if (!with_s2) {
    out.coefficients.push_back(0.0);
    out.std_errors.push_back(0.0);
  }
  out.ill_conditioned = out.condition_number > opts.condition_warning;
  return out;
}

}  // namespace

std::string_view to_string(FitModel m) {
  switch (m) {
    case FitModel::exp_slope: return "exp_slope";
    case FitModel::m0_law: return "m0_law";
    case FitModel::s0_linear: return "s0_linear";
    case FitModel::s0_loglog: return "s0_loglog";
  }
  return "unknown";
}

OlsResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n != y.size()) fail(ErrorKind::invalid_input, "design and response differ in length");
  if (n < p) fail(ErrorKind::insufficient_data, "fewer points than coefficients");

  // Columns are normalized before the SVD so the rank test and the reported
  // condition number do not depend on the units of each regressor.
  Eigen::VectorXd norms = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (norms(j) == 0) fail(ErrorKind::singular_fit, "design has an all-zero column");
  }
  const Eigen::MatrixXd scaled = design * norms.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(p - 1);
  if (!(smin > smax * 1e-12)) {
    fail(ErrorKind::singular_fit, "design matrix is singular (regressors are collinear)");
  }

  OlsResult r;
  r.condition_number = smax / smin;
  const Eigen::VectorXd scaled_beta = svd.solve(y);
  r.beta = scaled_beta.cwiseQuotient(norms);
  r.residuals = y - design * r.beta;
  const double rss = r.residuals.squaredNorm();
  r.residual_rms = std::sqrt(rss / static_cast<double>(n));

  r.std_errors = Eigen::VectorXd::Zero(p);
  if (n > p) {
    const double sigma2 = rss / static_cast<double>(n - p);
    const Eigen::MatrixXd v = svd.matrixV() * sv.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd cov_scaled = v * v.transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
      r.std_errors(j) = std::sqrt(sigma2 * cov_scaled(j, j)) / norms(j);
    }
  }
  return r;
}

FitResult fit_exp_slope(const SeparationSpectrum& spectrum) {
  const auto& bins = spectrum.bins();
  if (bins.size() < 3) {
    fail(ErrorKind::insufficient_data,
         "slope fit needs >= 3 nonzero bins, spectrum has " + std::to_string(bins.size()));
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(bins.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(bins.size()));
  Eigen::Index row = 0;
  for (const auto& [s, c] : bins) {
    x(row, 0) = 1.0;
    x(row, 1) = static_cast<double>(s);
    y(row) = std::log(static_cast<double>(c));
    ++row;
  }
  return from_ols(FitModel::exp_slope, ols(x, y));
}

FitResult fit_m0(std::span<const FitPoint> points) {
  if (points.empty()) fail(ErrorKind::insufficient_data, "m0 fit needs at least one point");
  // Least squares for a constant on m * ln(pi1).
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(points.size()), 1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].pi1 >= 3)) {
      fail(ErrorKind::domain, "m0 fit needs pi1 >= 3, got " + std::to_string(points[i].pi1));
    }
    y(static_cast<Eigen::Index>(i)) = points[i].value * std::log(points[i].pi1);
  }
  return from_ols(FitModel::m0_law, ols(x, y));
}

FitResult fit_s0_linear(std::span<const FitPoint> points) {
  if (points.size() < 2) fail(ErrorKind::insufficient_data, "linear fit needs >= 2 points");
  for (const FitPoint& p : points) log_pi1(p.pi1);
  return from_ols(FitModel::s0_linear, ols(loglog_design(points, false), values(points)));
}

FitResult fit_s0_loglog(std::span<const FitPoint> points, const LoglogOptions& opts) {
  FitResult out = loglog_core(points, opts);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const FitPoint& p : points) {
    lo = std::min(lo, std::log(p.pi1));
    hi = std::max(hi, std::log(p.pi1));
  }
  const double mid = 0.5 * (lo + hi);
  std::vector<FitPoint> upper;
  for (const FitPoint& p : points) {
    if (std::log(p.pi1) >= mid) upper.push_back(p);
  }
  if (upper.size() >= 4 && upper.size() < points.size()) {
    try {
      const FitResult refit = loglog_core(upper, opts);
      std::vector<double> deltas(out.coefficients.size());
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        deltas[i] = refit.coefficients[i] - out.coefficients[i];
      }
      out.range_deltas = std::move(deltas);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_fit) throw;
    }
  }
  return out;
}

}  // namespace twinsep
