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

#ifndef APS__FORWARD_MODEL_HPP_
#define APS__FORWARD_MODEL_HPP_

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>

namespace aps
{

/// Nonnegative discrete angular power spectrum sampled on an AngularGrid.
class ApsVector
{
public:
  ApsVector() = default;
  /// Throws InvalidArgument if any entry is negative or not finite.
  explicit ApsVector(Eigen::VectorXd values);

  const Eigen::VectorXd & values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

private:
  Eigen::VectorXd values_;
};

/// Uniform linear array with isotropic elements.
struct ArrayConfig
{
  int num_antennas = 16;
  double carrier_frequency_hz = 2.11e9;
  double wave_speed_m_s = 3.0e8;
  /// Half a wavelength when unset.
  std::optional<double> antenna_spacing_m;

  double wavelength_m() const { return wave_speed_m_s / carrier_frequency_hz; }
  double spacing_m() const { return antenna_spacing_m.value_or(0.5 * wavelength_m()); }
  double spacing_ratio() const { return spacing_m() / wavelength_m(); }

  void validate() const;
};

/// Midpoint-rule discretization of an angular interval.
class AngularGrid
{
public:
  double lower_rad() const noexcept { return lower_; }
  double upper_rad() const noexcept { return upper_; }
  Eigen::Index num_points() const noexcept { return angles_.size(); }
  const Eigen::VectorXd & angles_rad() const noexcept { return angles_; }
  /// Quadrature weight, interval length divided by the number of points.
  double weight() const noexcept { return weight_; }

  friend AngularGrid build_grid(double lower_rad, double upper_rad, Eigen::Index num_points);

private:
  double lower_ = 0.0;
  double upper_ = 0.0;
  double weight_ = 0.0;
  Eigen::VectorXd angles_;
};

/// theta_i = lower + (i - 1/2) (upper - lower) / D. Throws InvalidBounds if lower >= upper or D < 2.
AngularGrid build_grid(double lower_rad, double upper_rad, Eigen::Index num_points);

/// Real vectorized Toeplitz covariance, laid out as
/// [Re t_0, ..., Re t_{N-1}, Im t_1, ..., Im t_{N-1}] with t_l the lag-l entry.
struct CovarianceVector
{
  Eigen::VectorXd entries;

  int num_antennas() const { return static_cast<int>((entries.size() + 1) / 2); }
};

/// Hermitian Toeplitz matrix stored by its first row (lags 0..N-1).
class HermitianToeplitzCovariance
{
public:
  HermitianToeplitzCovariance() = default;
  /// The imaginary part of the lag-0 entry is discarded.
  explicit HermitianToeplitzCovariance(Eigen::VectorXcd first_row);

  const Eigen::VectorXcd & first_row() const noexcept { return first_row_; }
  int dimension() const noexcept { return static_cast<int>(first_row_.size()); }

  /// Entry (m, n) is t_{n-m} above the diagonal and conj(t_{m-n}) below it.
  Eigen::MatrixXcd to_matrix() const;

private:
  Eigen::VectorXcd first_row_;
};

/// The (2N-1) x D matrix mapping an APS to its vectorized covariance.
class ForwardOperator
{
public:
  ForwardOperator(Eigen::MatrixXd matrix, AngularGrid grid, ArrayConfig array);

  const Eigen::MatrixXd & matrix() const noexcept { return matrix_; }
  const AngularGrid & grid() const noexcept { return grid_; }
  const ArrayConfig & array() const noexcept { return array_; }
  int num_antennas() const noexcept { return array_.num_antennas; }
  Eigen::Index num_rows() const noexcept { return matrix_.rows(); }
  Eigen::Index num_columns() const noexcept { return matrix_.cols(); }
  /// Row whose entries all equal the grid weight.
  Eigen::Index constant_row_index() const noexcept { return 0; }

private:
  Eigen::MatrixXd matrix_;
  AngularGrid grid_;
  ArrayConfig array_;
};

/// Far-field ULA response: real rows w cos(2 pi (d/lambda) l sin theta) for l = 0..N-1,
/// imaginary rows w sin(2 pi (d/lambda) l sin theta) for l = 1..N-1.
ForwardOperator build_ula_operator(const ArrayConfig & array, const AngularGrid & grid);

/// r = A rho. Throws DimensionMismatch when the APS is not on the operator's grid.
CovarianceVector apply(const ForwardOperator & op, const Eigen::VectorXd & aps);
CovarianceVector apply(const ForwardOperator & op, const ApsVector & aps);

CovarianceVector vectorize(const HermitianToeplitzCovariance & covariance);
HermitianToeplitzCovariance devectorize(const CovarianceVector & vector);

/// Orthogonal projection (trace inner product) onto Hermitian Toeplitz matrices: each lag is the
/// mean of its diagonal, symmetrized with the conjugate of the mirrored diagonal.
HermitianToeplitzCovariance toeplitz_project(const Eigen::MatrixXcd & matrix);

/// Binary cache: magic, version, N, D, array and grid parameters, then the row-major matrix.
void save_operator(const ForwardOperator & op, const std::filesystem::path & path);
ForwardOperator load_operator(const std::filesystem::path & path);
/// Human-readable dump: a `# key=value` header followed by one CSV line per matrix row.
void save_operator_csv(const ForwardOperator & op, const std::filesystem::path & path);

}  // namespace aps

#endif  // APS__FORWARD_MODEL_HPP_
