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

#ifndef APS__ESTIMATORS_HPP_
#define APS__ESTIMATORS_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <vector>

#include "aps/forward_model.hpp"
#include "aps/solvers.hpp"
#include "aps/statistics.hpp"

namespace aps
{

/// Q = A^T A + (1/(2 gamma)) M and its Cholesky factor L_Q (Q = L_Q L_Q^T).
class ProxSubproblem
{
public:
  ProxSubproblem(const Eigen::MatrixXd & operator_a, const MahalanobisMetric & metric,
    double gamma);

  const Eigen::MatrixXd & q_matrix() const noexcept { return q_; }
  const Eigen::LLT<Eigen::MatrixXd> & factor() const noexcept { return factor_; }
  double gamma() const noexcept { return gamma_; }

private:
  Eigen::MatrixXd q_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  double gamma_;
};

/// prox of gamma * (||A y - r||^2 + indicator(y >= 0)) in the metric M: the minimizer over
/// y >= 0 of ||A y - r||^2 + (1/(2 gamma)) ||y - x||_M^2. Each evaluation is one NNLS solve
/// with design L_Q^T and target L_Q^{-1} c, c = A^T r + (1/(2 gamma)) M x, run on its normal
/// equations Q y = c. Q and L_Q are built once.
class ProxMapping
{
public:
  ProxMapping(const Eigen::MatrixXd & operator_a, const Eigen::VectorXd & target_r,
    const MahalanobisMetric & metric, double gamma, NnlsOptions options = {});

  /// `warm_start` (e.g. the previous output) only affects speed, not the result.
  NnlsResult solve(const Eigen::VectorXd & x, const Eigen::VectorXd * warm_start = nullptr) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd & x) const { return solve(x).solution; }

  /// c for the point x.
  Eigen::VectorXd linear_term(const Eigen::VectorXd & x) const;
  const ProxSubproblem & subproblem() const noexcept { return sub_; }

private:
  ProxSubproblem sub_;
  Eigen::MatrixXd scaled_metric_;
  Eigen::VectorXd atr_;
  NnlsOptions options_;
};

ApsVector prox_g(const MahalanobisMetric & metric, const Eigen::MatrixXd & operator_a,
  const Eigen::VectorXd & target_r, double gamma, const Eigen::VectorXd & x);

/// Haugazeau's three-point map in the metric M: the projection of x onto
/// {u : <u - y, x - y> <= 0} intersected with {u : <u - z, y - z> <= 0}.
/// Throws Infeasible when the two halfspaces do not intersect.
Eigen::VectorXd haugazeau_q(const MahalanobisMetric & metric, const Eigen::VectorXd & x,
  const Eigen::VectorXd & y, const Eigen::VectorXd & z);

struct HaugazeauConfig
{
  double gamma = 5.0;
  int max_iterations = 500;
  /// <= 0 selects 1e-7 * (1 + ||rho_hat||_M).
  double fixed_point_tol = 0.0;
  NnlsOptions nnls;
};

struct RegularizedConfig
{
  double mu = 5e4;
  NnlsOptions nnls;
};

struct IterationRecord
{
  int iteration;
  /// NaN when no ground truth was supplied.
  double nmse;
  double feasibility_residual;
  double fixed_point_gap;
  double elapsed_ms;
};

struct ConvergenceReport
{
  bool converged = false;
  /// Number of updates performed.
  int iterations = 0;
  double fixed_point_tol = 0.0;
  std::vector<IterationRecord> trace;
  Eigen::VectorXd final_iterate;
};

struct HaugazeauResult
{
  /// Cone projection of the final iterate.
  ApsVector estimate;
  ConvergenceReport report;
};

/// Projection of rho_hat, in the metric M, onto the minimizers of ||A rho - r||^2 over rho >= 0,
/// computed by Haugazeau's iteration rho_{n+1} = Q(rho_hat, rho_n, prox(rho_n)).
/// Stops once ||rho_n - prox(rho_n)||_M <= tol or after max_iterations updates.
HaugazeauResult haugazeau_estimate(const MahalanobisMetric & metric,
  const Eigen::MatrixXd & operator_a, const Eigen::VectorXd & target_r,
  const Eigen::VectorXd & rho_hat, const HaugazeauConfig & config,
  const Eigen::VectorXd * truth = nullptr, const IterateObserver & observer = {});

/// Minimizer over rho >= 0 of ||rho - rho_hat||_M^2 + mu ||A rho - r||^2, i.e. the prox with
/// gamma = mu / 2 evaluated at rho_hat: a single NNLS solve.
ApsVector regularized_estimate(const MahalanobisMetric & metric,
  const Eigen::MatrixXd & operator_a, const Eigen::VectorXd & target_r,
  const Eigen::VectorXd & rho_hat, const RegularizedConfig & config);

}  // namespace aps

#endif  // APS__ESTIMATORS_HPP_
