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

#ifndef APS__SOLVERS_HPP_
#define APS__SOLVERS_HPP_

#include <Eigen/Dense>
#include <Eigen/QR>

#include <functional>
#include <vector>

#include "aps/forward_model.hpp"

namespace aps
{

struct NnlsOptions
{
  /// Dual feasibility tolerance; <= 0 selects 1e-10 * ||B^T b||_inf.
  double tolerance = 0.0;
  /// Outer-iteration cap; <= 0 selects 10 * columns.
  int max_iterations = 0;
};

struct NnlsResult
{
  Eigen::VectorXd solution;
  double residual_norm = 0.0;
  /// Indices held at zero.
  std::vector<Eigen::Index> active_set;
  int iterations = 0;
};

/// Minimizes ||B x - b||_2 over x >= 0 with the Lawson-Hanson active-set method.
/// Throws IterationLimit when the outer-iteration cap is reached.
NnlsResult nnls(const Eigen::MatrixXd & design, const Eigen::VectorXd & target,
  const NnlsOptions & options = {});

/// The same iteration on the normal equations: minimizes x^T G x - 2 h^T x over x >= 0 for
/// G = B^T B, h = B^T b. `target_sq_norm` is ||b||^2 and only feeds the reported residual.
/// A nonnegative `warm_start` seeds the passive set with its support.
NnlsResult nnls_gram(const Eigen::MatrixXd & gram, const Eigen::VectorXd & rhs,
  double target_sq_norm, const NnlsOptions & options = {},
  const Eigen::VectorXd * warm_start = nullptr);

/// Largest KKT violation of x for min x^T G x - 2 h^T x, x >= 0, measured on the half gradient
/// g = G x - h: max(-g_i) where x_i = 0, |g_i| where x_i > 0, and max(-x_i).
double kkt_violation_gram(
  const Eigen::MatrixXd & gram, const Eigen::VectorXd & rhs, const Eigen::VectorXd & x);
double kkt_violation(
  const Eigen::MatrixXd & design, const Eigen::VectorXd & target, const Eigen::VectorXd & x);

/// Componentwise max(x, 0).
Eigen::VectorXd project_cone(const Eigen::VectorXd & x);

/// The affine set {rho : A rho = r} with a cached rank-revealing factorization of A.
class FeasibilityProblem
{
public:
  FeasibilityProblem(Eigen::MatrixXd operator_a, Eigen::VectorXd target_r);

  const Eigen::MatrixXd & operator_a() const noexcept { return a_; }
  const Eigen::VectorXd & target_r() const noexcept { return r_; }
  Eigen::Index dimension() const noexcept { return a_.cols(); }

  /// x - A^+(A x - r).
  Eigen::VectorXd project_affine(const Eigen::VectorXd & x) const;
  /// ||A x - r||_2.
  double residual(const Eigen::VectorXd & x) const;
  /// Euclidean distance from x to the affine set.
  double distance_to_affine(const Eigen::VectorXd & x) const;

private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd r_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> factor_;
};

Eigen::VectorXd project_affine(const FeasibilityProblem & problem, const Eigen::VectorXd & x);

struct PocsOptions
{
  int max_iterations = 500;
  double tolerance = 1e-8;
  /// In (0, 2].
  double relaxation = 1.0;
};

struct PocsTraceEntry
{
  int iteration;
  double residual;
  double min_entry;
  double distance_to_affine;
};

struct PocsResult
{
  /// Cone projection of the final iterate.
  ApsVector estimate;
  Eigen::VectorXd final_iterate;
  bool converged = false;
  int iterations = 0;
  std::vector<PocsTraceEntry> trace;
};

/// Called with (iteration, iterate) for the starting point and after every update.
using IterateObserver = std::function<void(int, const Eigen::VectorXd &)>;

/// Relaxed alternating projections x <- x + lambda (P_K P_V x - x) until
/// ||A x - r|| / ||r|| <= tol and min(x) >= -tol, or the iteration budget runs out.
PocsResult pocs_baseline(const FeasibilityProblem & problem, const Eigen::VectorXd & x0,
  const PocsOptions & options = {}, const IterateObserver & observer = {});

}  // namespace aps

#endif  // APS__SOLVERS_HPP_
