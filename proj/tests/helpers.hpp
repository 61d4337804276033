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

#ifndef APS_TESTS__HELPERS_HPP_
#define APS_TESTS__HELPERS_HPP_

#include <Eigen/Dense>

#include <numbers>
#include <random>

#include "aps/forward_model.hpp"
#include "aps/statistics.hpp"

namespace aps::testing
{

inline Eigen::MatrixXd random_matrix(std::mt19937_64 & rng, Eigen::Index rows, Eigen::Index cols)
{
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = g(rng);
  }
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64 & rng, Eigen::Index n)
{
  return random_matrix(rng, n, 1);
}

inline Eigen::VectorXd random_nonnegative(std::mt19937_64 & rng, Eigen::Index n)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = u(rng);
  }
  return v;
}

/// Random SPD matrix with eigenvalues in [lo, 1].
inline Eigen::MatrixXd random_spd(std::mt19937_64 & rng, Eigen::Index n, double lo = 0.05)
{
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rng, n, n));
  const Eigen::MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> u(lo, 1.0);
  Eigen::VectorXd eig(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    eig[i] = u(rng);
  }
  eig[0] = 1.0;
  const Eigen::MatrixXd m = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

/// Small ULA operator: N antennas, D grid points over [-pi/2, pi/2], half-wavelength spacing.
inline ForwardOperator small_ula(int antennas, Eigen::Index points)
{
  ArrayConfig array;
  array.num_antennas = antennas;
  const AngularGrid grid = build_grid(-std::numbers::pi / 2.0, std::numbers::pi / 2.0, points);
  return build_ula_operator(array, grid);
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64 & rng, Eigen::Index n)
{
  const Eigen::MatrixXd re = random_matrix(rng, n, n);
  const Eigen::MatrixXd im = random_matrix(rng, n, n);
  Eigen::MatrixXcd m(n, n);
  m.real() = re;
  m.imag() = im;
  return 0.5 * (m + m.adjoint());
}

/// Small problem with a strictly positive constant first row, like the ULA operator.
struct SmallInstance
{
  Eigen::MatrixXd a;
  Eigen::VectorXd rho_true;
  Eigen::VectorXd r;
  Eigen::VectorXd rho_hat;
  MahalanobisMetric metric = MahalanobisMetric::identity(1);
};

/// r = A rho_true exactly when `consistent`; otherwise r is pushed off A(K) by a random
/// perturbation that lowers the constant-row entry.
inline SmallInstance small_instance(
  std::mt19937_64 & rng, Eigen::Index dim, Eigen::Index rows, bool consistent = true)
{
  SmallInstance inst;
  inst.a = random_matrix(rng, rows, dim);
  inst.a.row(0).setConstant(0.5);
  inst.rho_true = random_nonnegative(rng, dim);
  std::uniform_int_distribution<Eigen::Index> pick(0, dim - 1);
  inst.rho_true[pick(rng)] = 0.0;
  inst.r = inst.a * inst.rho_true;
  if (!consistent) {
    inst.r += 0.5 * random_vector(rng, rows);
    inst.r[0] -= 0.5 * inst.rho_true.sum();
  }
  inst.rho_hat = random_nonnegative(rng, dim) + 0.2 * random_vector(rng, dim);
  inst.metric = MahalanobisMetric::from_matrix(random_spd(rng, dim));
  return inst;
}

}  // namespace aps::testing

#endif  // APS_TESTS__HELPERS_HPP_
