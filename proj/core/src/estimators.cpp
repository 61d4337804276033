// Copyright 2026 The aps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aps/estimators.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "aps/error.hpp"
#include "aps/nmse.hpp"

namespace aps
{

ProxSubproblem::ProxSubproblem(
  const Eigen::MatrixXd & operator_a, const MahalanobisMetric & metric, double gamma)
: gamma_(gamma)
{
  require(gamma > 0.0 && std::isfinite(gamma), ErrorKind::InvalidArgument, "gamma must be > 0");
  require(metric.dimension() == operator_a.cols(), ErrorKind::DimensionMismatch,
    "metric dimension does not match the operator");
  q_ = operator_a.transpose() * operator_a + (0.5 / gamma) * metric.matrix();
  q_ = 0.5 * (q_ + q_.transpose()).eval();
  factor_.compute(q_);
  if (factor_.info() != Eigen::Success) {
    fail(ErrorKind::FactorizationFailure, "prox quadratic form is not positive definite");
  }
}

ProxMapping::ProxMapping(const Eigen::MatrixXd & operator_a, const Eigen::VectorXd & target_r,
  const MahalanobisMetric & metric, double gamma, NnlsOptions options)
: sub_(operator_a, metric, gamma),
  scaled_metric_((0.5 / gamma) * metric.matrix()),
  options_(options)
{
  require(target_r.size() == operator_a.rows(), ErrorKind::DimensionMismatch,
    "target length does not match the operator");
  atr_ = operator_a.transpose() * target_r;
}

Eigen::VectorXd ProxMapping::linear_term(const Eigen::VectorXd & x) const
{
  require(x.size() == atr_.size(), ErrorKind::DimensionMismatch, "prox argument length mismatch");
  return atr_ + scaled_metric_ * x;
}

NnlsResult ProxMapping::solve(const Eigen::VectorXd & x, const Eigen::VectorXd * warm_start) const
{
  const Eigen::VectorXd c = linear_term(x);
  const double target_sq = sub_.factor().matrixL().solve(c).squaredNorm();
  return nnls_gram(sub_.q_matrix(), c, target_sq, options_, warm_start);
}

ApsVector prox_g(const MahalanobisMetric & metric, const Eigen::MatrixXd & operator_a,
  const Eigen::VectorXd & target_r, double gamma, const Eigen::VectorXd & x)
{
  return ApsVector(ProxMapping(operator_a, target_r, metric, gamma).solve(x).solution);
}

Eigen::VectorXd haugazeau_q(const MahalanobisMetric & metric, const Eigen::VectorXd & x,
  const Eigen::VectorXd & y, const Eigen::VectorXd & z)
{
  require(x.size() == metric.dimension() && y.size() == x.size() && z.size() == x.size(),
    ErrorKind::DimensionMismatch, "Haugazeau arguments differ in length");
  const Eigen::VectorXd xy = x - y;
  const Eigen::VectorXd yz = y - z;
  const Eigen::VectorXd m_xy = metric.matrix() * xy;
  const Eigen::VectorXd m_yz = metric.matrix() * yz;
  const double chi = xy.dot(m_yz);
  const double mu = xy.dot(m_xy);
  const double nu = yz.dot(m_yz);
  double delta = mu * nu - chi * chi;
  // delta >= 0 by Cauchy-Schwarz; clamp roundoff so the branch choice is stable near convergence.
  if (delta <= 1e-14 * mu * nu) {
    delta = 0.0;
  }

  if (delta == 0.0) {
    if (chi >= 0.0) {
      return z;
    }
    fail(ErrorKind::Infeasible, "Haugazeau halfspaces have empty intersection");
  }
  if (chi * nu >= delta) {
    // delta > 0 forces nu > 0
    return x - (1.0 + chi / nu) * yz;
  }
  return y + (nu / delta) * (chi * xy - mu * yz);
}

HaugazeauResult haugazeau_estimate(const MahalanobisMetric & metric,
  const Eigen::MatrixXd & operator_a, const Eigen::VectorXd & target_r,
  const Eigen::VectorXd & rho_hat, const HaugazeauConfig & config,
  const Eigen::VectorXd * truth, const IterateObserver & observer)
{
  require(rho_hat.size() == operator_a.cols(), ErrorKind::DimensionMismatch,
    "rho_hat length does not match the operator");
  require(config.max_iterations >= 0, ErrorKind::InvalidArgument,
    "max_iterations must be nonnegative");
  if (config.fixed_point_tol < 0.0) {
    fail(ErrorKind::InvalidArgument, "fixed_point_tol must be > 0");
  }

  const ProxMapping prox(operator_a, target_r, metric, config.gamma, config.nnls);
  const auto start = std::chrono::steady_clock::now();

  HaugazeauResult result;
  ConvergenceReport & report = result.report;
  report.fixed_point_tol = config.fixed_point_tol > 0.0
    ? config.fixed_point_tol
    : 1e-7 * (1.0 + metric.norm(rho_hat));

  Eigen::VectorXd rho = rho_hat;
  Eigen::VectorXd warm;
  for (int k = 0;; ++k) {
    NnlsResult p = prox.solve(rho, warm.size() ? &warm : nullptr);
    const double gap = metric.distance(rho, p.solution);

    IterationRecord rec;
    rec.iteration = k;
    rec.nmse = truth ? nmse(project_cone(rho), *truth) : std::numeric_limits<double>::quiet_NaN();
    rec.feasibility_residual = (operator_a * rho - target_r).norm();
    rec.fixed_point_gap = gap;
    rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.trace.push_back(rec);
    if (observer) {
      observer(k, rho);
    }

    report.iterations = k;
    if (gap <= report.fixed_point_tol) {
      report.converged = true;
      break;
    }
    if (k == config.max_iterations) {
      break;
    }
    rho = haugazeau_q(metric, rho_hat, rho, p.solution);
    warm = std::move(p.solution);
  }

  result.estimate = ApsVector(project_cone(rho));
  report.final_iterate = std::move(rho);
  return result;
}

ApsVector regularized_estimate(const MahalanobisMetric & metric,
  const Eigen::MatrixXd & operator_a, const Eigen::VectorXd & target_r,
  const Eigen::VectorXd & rho_hat, const RegularizedConfig & config)
{
  require(config.mu > 0.0 && std::isfinite(config.mu), ErrorKind::InvalidArgument,
    "mu must be > 0");
  const ProxMapping prox(operator_a, target_r, metric, 0.5 * config.mu, config.nnls);
  return ApsVector(prox.solve(rho_hat).solution);
}

}  // namespace aps
