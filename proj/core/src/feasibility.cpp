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

#include <cmath>

#include "aps/error.hpp"
#include "aps/solvers.hpp"

namespace aps
{

FeasibilityProblem::FeasibilityProblem(Eigen::MatrixXd operator_a, Eigen::VectorXd target_r)
: a_(std::move(operator_a)), r_(std::move(target_r))
{
  require(a_.rows() == r_.size(), ErrorKind::DimensionMismatch,
    "operator rows do not match the target length");
  require(a_.cols() >= 1, ErrorKind::DimensionMismatch, "operator has no columns");
  factor_.setThreshold(1e-12);
  factor_.compute(a_);
  if (factor_.info() != Eigen::Success) {
    fail(ErrorKind::FactorizationFailure, "orthogonal decomposition of the operator failed");
  }
}

Eigen::VectorXd FeasibilityProblem::project_affine(const Eigen::VectorXd & x) const
{
  require(x.size() == a_.cols(), ErrorKind::DimensionMismatch, "vector length mismatch");
  const Eigen::VectorXd correction = factor_.solve(a_ * x - r_);
  if (!correction.allFinite()) {
    fail(ErrorKind::FactorizationFailure, "pseudo-inverse application produced non-finite values");
  }
  return x - correction;
}

double FeasibilityProblem::residual(const Eigen::VectorXd & x) const
{
  require(x.size() == a_.cols(), ErrorKind::DimensionMismatch, "vector length mismatch");
  return (a_ * x - r_).norm();
}

double FeasibilityProblem::distance_to_affine(const Eigen::VectorXd & x) const
{
  return (x - project_affine(x)).norm();
}

Eigen::VectorXd project_affine(const FeasibilityProblem & problem, const Eigen::VectorXd & x)
{
  return problem.project_affine(x);
}

PocsResult pocs_baseline(const FeasibilityProblem & problem, const Eigen::VectorXd & x0,
  const PocsOptions & options, const IterateObserver & observer)
{
  require(x0.size() == problem.dimension(), ErrorKind::DimensionMismatch,
    "starting point length mismatch");
  require(options.relaxation > 0.0 && options.relaxation <= 2.0, ErrorKind::InvalidArgument,
    "relaxation must lie in (0, 2]");

  const double r_norm = problem.target_r().norm();
  const double denom = r_norm > 0.0 ? r_norm : 1.0;

  PocsResult result;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd on_affine;
  auto record = [&](int k) {
    on_affine = problem.project_affine(x);
    PocsTraceEntry entry{k, problem.residual(x), x.minCoeff(), (x - on_affine).norm()};
    result.trace.push_back(entry);
    if (observer) {
      observer(k, x);
    }
    return entry;
  };
  auto converged = [&](const PocsTraceEntry & e) {
    return e.residual / denom <= options.tolerance && e.min_entry >= -options.tolerance;
  };

  PocsTraceEntry last = record(0);
  result.converged = converged(last);
  int k = 0;
  while (!result.converged && k < options.max_iterations) {
    const Eigen::VectorXd target = project_cone(on_affine);
    x += options.relaxation * (target - x);
    ++k;
    last = record(k);
    result.converged = converged(last);
  }
  result.iterations = k;
  result.estimate = ApsVector(project_cone(x));
  result.final_iterate = std::move(x);
  return result;
}

}  // namespace aps
