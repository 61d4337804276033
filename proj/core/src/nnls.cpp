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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aps/error.hpp"
#include "aps/solvers.hpp"

namespace aps
{
namespace
{

using Index = Eigen::Index;

std::vector<Index> members(const std::vector<char> & mask)
{
  std::vector<Index> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      out.push_back(static_cast<Index>(i));
    }
  }
  return out;
}

// Normal-equation backend: min x^T G x - 2 h^T x.
struct GramSystem
{
  const Eigen::MatrixXd & gram;
  const Eigen::VectorXd & rhs;

  Index size() const { return rhs.size(); }

  Eigen::VectorXd dual(const Eigen::VectorXd & x) const { return rhs - gram * x; }

  // Solves G_PP z_P = h_P. Returns false if G_PP is not numerically positive definite.
  bool solve(const std::vector<Index> & passive, Eigen::VectorXd & z) const
  {
    const auto p = static_cast<Index>(passive.size());
    z.setZero();
    if (p == 0) {
      return true;
    }
    Eigen::MatrixXd sub(p, p);
    Eigen::VectorXd sub_rhs(p);
    for (Index i = 0; i < p; ++i) {
      sub_rhs[i] = rhs[passive[i]];
      for (Index j = 0; j <= i; ++j) {
        sub(i, j) = gram(passive[i], passive[j]);
      }
    }
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(sub);
    if (llt.info() != Eigen::Success) {
      return false;
    }
    const Eigen::VectorXd sol = llt.solve(sub_rhs);
    if (!sol.allFinite()) {
      return false;
    }
    z(passive) = sol;
    return true;
  }
};

// Design-matrix backend: min ||B x - b||^2 with QR on the passive columns.
struct DesignSystem
{
  const Eigen::MatrixXd & design;
  const Eigen::VectorXd & target;

  Index size() const { return design.cols(); }

  Eigen::VectorXd dual(const Eigen::VectorXd & x) const
  {
    return design.transpose() * (target - design * x);
  }

  // Least squares on B_P. Returns false if B_P is numerically rank deficient.
  bool solve(const std::vector<Index> & passive, Eigen::VectorXd & z) const
  {
    z.setZero();
    if (passive.empty()) {
      return true;
    }
    const Eigen::MatrixXd sub = design(Eigen::placeholders::all, passive);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < static_cast<Index>(passive.size())) {
      return false;
    }
    const Eigen::VectorXd sol = qr.solve(target);
    if (!sol.allFinite()) {
      return false;
    }
    z(passive) = sol;
    return true;
  }
};

// Lawson-Hanson inner loop: moves x toward the unconstrained passive solution, dropping
// variables that hit zero, until that solution is strictly positive. `entering` is the index
// just added (or -1); returns false if it has to be rejected immediately.
template <typename System>
bool settle(const System & sys, std::vector<char> & passive, Eigen::VectorXd & x, Index entering)
{
  const Index n = x.size();
  Eigen::VectorXd z(n);
  for (Index guard = 0; guard <= n; ++guard) {
    const auto p = members(passive);
    const bool ok = sys.solve(p, z);
    if (entering >= 0 && (!ok || z[entering] <= 0.0)) {
      passive[static_cast<std::size_t>(entering)] = 0;
      return false;
    }
    entering = -1;
    if (!ok) {
      fail(ErrorKind::FactorizationFailure, "passive-set least-squares system is singular");
    }

    bool positive = true;
    Index blocking = -1;
    double step = 1.0;
    for (Index i : p) {
      if (z[i] <= 0.0) {
        positive = false;
        const double ratio = x[i] / (x[i] - z[i]);
        if (ratio < step || blocking < 0) {
          step = ratio;
          blocking = i;
        }
      }
    }
    if (positive) {
      x = z;
      return true;
    }

    x += step * (z - x);
    for (Index i : p) {
      if (i == blocking || x[i] <= 0.0) {
        x[i] = 0.0;
        passive[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  fail(ErrorKind::IterationLimit, "active-set inner loop did not settle");
}

template <typename System>
NnlsResult active_set(const System & sys, const NnlsOptions & options,
  const Eigen::VectorXd * warm_start)
{
  const Index n = sys.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double scale = sys.dual(x).cwiseAbs().maxCoeff();
  const double tol = options.tolerance > 0.0
    ? options.tolerance
    : 1e-10 * (scale > 0.0 ? scale : 1.0);
  const int max_iterations =
    options.max_iterations > 0 ? options.max_iterations : 10 * static_cast<int>(n);

  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  if (warm_start != nullptr) {
    require(warm_start->size() == n, ErrorKind::DimensionMismatch, "warm start has wrong length");
    for (Index i = 0; i < n; ++i) {
      if ((*warm_start)[i] > 0.0) {
        x[i] = (*warm_start)[i];
        passive[static_cast<std::size_t>(i)] = 1;
      }
    }
    settle(sys, passive, x, -1);
  }

  // Indices whose entry was rejected since the last successful step; without this guard a
  // roundoff-positive dual could make the same index enter forever.
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  int iterations = 0;
  while (true) {
    const Eigen::VectorXd dual = sys.dual(x);
    Index entering = -1;
    double best = tol;
    for (Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (!passive[k] && !blocked[k] && dual[i] > best) {
        best = dual[i];
        entering = i;
      }
    }
    if (entering < 0) {
      break;
    }
    if (++iterations > max_iterations) {
      fail(ErrorKind::IterationLimit,
        "NNLS exceeded " + std::to_string(max_iterations) + " outer iterations");
    }
    passive[static_cast<std::size_t>(entering)] = 1;
    if (settle(sys, passive, x, entering)) {
      std::fill(blocked.begin(), blocked.end(), 0);
    } else {
      blocked[static_cast<std::size_t>(entering)] = 1;
    }
  }

  NnlsResult result;
  result.iterations = iterations;
  for (Index i = 0; i < n; ++i) {
    if (x[i] <= 0.0) {
      x[i] = 0.0;
      result.active_set.push_back(i);
    }
  }
  result.solution = std::move(x);
  return result;
}

}  // namespace

NnlsResult nnls_gram(const Eigen::MatrixXd & gram, const Eigen::VectorXd & rhs,
  double target_sq_norm, const NnlsOptions & options, const Eigen::VectorXd * warm_start)
{
  const Index n = rhs.size();
  require(n >= 1, ErrorKind::DimensionMismatch, "NNLS needs at least one column");
  require(gram.rows() == n && gram.cols() == n, ErrorKind::DimensionMismatch,
    "Gram matrix does not match the right-hand side");
  NnlsResult result = active_set(GramSystem{gram, rhs}, options, warm_start);
  const Eigen::VectorXd & x = result.solution;
  const double objective = x.dot(gram * x) - 2.0 * rhs.dot(x) + target_sq_norm;
  result.residual_norm = std::sqrt(std::max(objective, 0.0));
  return result;
}

NnlsResult nnls(
  const Eigen::MatrixXd & design, const Eigen::VectorXd & target, const NnlsOptions & options)
{
  require(design.cols() >= 1, ErrorKind::DimensionMismatch, "NNLS needs at least one column");
  require(design.rows() == target.size(), ErrorKind::DimensionMismatch,
    "design rows do not match the target length");
  NnlsResult result = active_set(DesignSystem{design, target}, options, nullptr);
  result.residual_norm = (design * result.solution - target).norm();
  return result;
}

double kkt_violation_gram(
  const Eigen::MatrixXd & gram, const Eigen::VectorXd & rhs, const Eigen::VectorXd & x)
{
  const Eigen::VectorXd grad = gram * x - rhs;
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, -x[i]);
    worst = std::max(worst, x[i] > 0.0 ? std::abs(grad[i]) : -grad[i]);
  }
  return worst;
}

double kkt_violation(
  const Eigen::MatrixXd & design, const Eigen::VectorXd & target, const Eigen::VectorXd & x)
{
  return kkt_violation_gram(
    design.transpose() * design, design.transpose() * target, x);
}

Eigen::VectorXd project_cone(const Eigen::VectorXd & x) { return x.cwiseMax(0.0); }

}  // namespace aps
