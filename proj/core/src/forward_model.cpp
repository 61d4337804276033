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

#include "aps/forward_model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "aps/error.hpp"

namespace aps
{

ApsVector::ApsVector(Eigen::VectorXd values) : values_(std::move(values))
{
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      fail(ErrorKind::InvalidArgument,
        "APS entry " + std::to_string(i) + " is negative or not finite");
    }
  }
}

void ArrayConfig::validate() const
{
  require(num_antennas >= 2, ErrorKind::InvalidArgument, "array needs at least two antennas");
  require(carrier_frequency_hz > 0.0 && std::isfinite(carrier_frequency_hz),
    ErrorKind::InvalidArgument, "carrier frequency must be positive");
  require(wave_speed_m_s > 0.0 && std::isfinite(wave_speed_m_s), ErrorKind::InvalidArgument,
    "wave speed must be positive");
  if (antenna_spacing_m) {
    require(*antenna_spacing_m > 0.0 && std::isfinite(*antenna_spacing_m),
      ErrorKind::InvalidArgument, "antenna spacing must be positive");
  }
  require(std::isfinite(spacing_ratio()), ErrorKind::InvalidArgument,
    "spacing to wavelength ratio is not finite");
}

AngularGrid build_grid(double lower_rad, double upper_rad, Eigen::Index num_points)
{
  if (!(lower_rad < upper_rad) || !std::isfinite(lower_rad) || !std::isfinite(upper_rad)) {
    fail(ErrorKind::InvalidBounds, "grid lower bound must be below the upper bound");
  }
  require(num_points >= 2, ErrorKind::InvalidBounds, "grid needs at least two points");

  AngularGrid grid;
  grid.lower_ = lower_rad;
  grid.upper_ = upper_rad;
  grid.weight_ = (upper_rad - lower_rad) / static_cast<double>(num_points);
  grid.angles_.resize(num_points);
  for (Eigen::Index i = 0; i < num_points; ++i) {
    grid.angles_[i] = lower_rad + (static_cast<double>(i) + 0.5) * grid.weight_;
  }
  return grid;
}

HermitianToeplitzCovariance::HermitianToeplitzCovariance(Eigen::VectorXcd first_row)
: first_row_(std::move(first_row))
{
  require(first_row_.size() >= 1, ErrorKind::DimensionMismatch, "empty Toeplitz covariance");
  first_row_[0] = first_row_[0].real();
}

Eigen::MatrixXcd HermitianToeplitzCovariance::to_matrix() const
{
  const Eigen::Index n = first_row_.size();
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out(m, k) = k >= m ? first_row_[k - m] : std::conj(first_row_[m - k]);
    }
  }
  return out;
}

ForwardOperator::ForwardOperator(Eigen::MatrixXd matrix, AngularGrid grid, ArrayConfig array)
: matrix_(std::move(matrix)), grid_(std::move(grid)), array_(std::move(array))
{
  array_.validate();
  require(matrix_.rows() == 2 * array_.num_antennas - 1, ErrorKind::DimensionMismatch,
    "operator must have 2N-1 rows");
  require(matrix_.cols() == grid_.num_points(), ErrorKind::DimensionMismatch,
    "operator must have one column per grid point");
}

ForwardOperator build_ula_operator(const ArrayConfig & array, const AngularGrid & grid)
{
  array.validate();
  const int n = array.num_antennas;
  const Eigen::Index d = grid.num_points();
  const double w = grid.weight();
  const double k = 2.0 * std::numbers::pi * array.spacing_ratio();

  Eigen::MatrixXd a(2 * n - 1, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double s = std::sin(grid.angles_rad()[i]);
    a(0, i) = w;
    for (int lag = 1; lag < n; ++lag) {
      const double phase = k * lag * s;
      a(lag, i) = w * std::cos(phase);
      a(n - 1 + lag, i) = w * std::sin(phase);
    }
  }
  return ForwardOperator(std::move(a), grid, array);
}

CovarianceVector apply(const ForwardOperator & op, const Eigen::VectorXd & aps)
{
  require(aps.size() == op.num_columns(), ErrorKind::DimensionMismatch,
    "APS length does not match the operator grid");
  return CovarianceVector{op.matrix() * aps};
}

CovarianceVector apply(const ForwardOperator & op, const ApsVector & aps)
{
  return apply(op, aps.values());
}

CovarianceVector vectorize(const HermitianToeplitzCovariance & covariance)
{
  const int n = covariance.dimension();
  require(n >= 1, ErrorKind::DimensionMismatch, "empty covariance");
  CovarianceVector out{Eigen::VectorXd(2 * n - 1)};
  for (int lag = 0; lag < n; ++lag) {
    out.entries[lag] = covariance.first_row()[lag].real();
  }
  for (int lag = 1; lag < n; ++lag) {
    out.entries[n - 1 + lag] = covariance.first_row()[lag].imag();
  }
  return out;
}

HermitianToeplitzCovariance devectorize(const CovarianceVector & vector)
{
  const Eigen::Index len = vector.entries.size();
  require(len >= 1 && len % 2 == 1, ErrorKind::DimensionMismatch,
    "covariance vector length must be 2N-1");
  const int n = vector.num_antennas();
  Eigen::VectorXcd row(n);
  row[0] = vector.entries[0];
  for (int lag = 1; lag < n; ++lag) {
    row[lag] = {vector.entries[lag], vector.entries[n - 1 + lag]};
  }
  return HermitianToeplitzCovariance(std::move(row));
}

HermitianToeplitzCovariance toeplitz_project(const Eigen::MatrixXcd & matrix)
{
  require(matrix.rows() == matrix.cols() && matrix.rows() >= 1, ErrorKind::DimensionMismatch,
    "Toeplitz projection needs a square matrix");
  const Eigen::Index n = matrix.rows();
  Eigen::VectorXcd row(n);
  for (Eigen::Index lag = 0; lag < n; ++lag) {
    std::complex<double> upper = 0.0;
    std::complex<double> lower = 0.0;
    for (Eigen::Index m = 0; m + lag < n; ++m) {
      upper += matrix(m, m + lag);
      lower += matrix(m + lag, m);
    }
    row[lag] = 0.5 * (upper + std::conj(lower)) / static_cast<double>(n - lag);
  }
  return HermitianToeplitzCovariance(std::move(row));
}

}  // namespace aps
