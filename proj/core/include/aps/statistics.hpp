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

#ifndef APS__STATISTICS_HPP_
#define APS__STATISTICS_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <filesystem>
#include <span>

#include "aps/forward_model.hpp"

namespace aps
{

/// Sample mean and unbiased sample covariance of an APS dataset.
struct DatasetStatistics
{
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::size_t sample_count = 0;
};

/// Throws InsufficientSamples for fewer than two samples, DimensionMismatch for ragged input.
/// Negative entries in the samples only produce a warning on stderr.
DatasetStatistics compute_statistics(std::span<const ApsVector> dataset);
DatasetStatistics compute_statistics(std::span<const Eigen::VectorXd> dataset);

/// Largest eigenvalue of a symmetric PSD matrix.
double spectral_norm(const Eigen::MatrixXd & symmetric);

/// Inner product <x, y> = x^T M y for M = (C + alpha I)^{-1}, optionally rescaled so that the
/// largest eigenvalue of M is one.
class MahalanobisMetric
{
public:
  /// Wraps an arbitrary symmetric positive-definite matrix; throws FactorizationFailure otherwise.
  static MahalanobisMetric from_matrix(Eigen::MatrixXd matrix);
  static MahalanobisMetric identity(Eigen::Index dimension);

  const Eigen::MatrixXd & matrix() const noexcept { return matrix_; }
  /// Lower-triangular L with M = L L^T.
  const Eigen::MatrixXd & cholesky_factor() const noexcept { return factor_; }
  double alpha() const noexcept { return alpha_; }
  bool normalized() const noexcept { return normalized_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }

  double inner(const Eigen::VectorXd & x, const Eigen::VectorXd & y) const;
  double norm(const Eigen::VectorXd & x) const;
  double distance(const Eigen::VectorXd & x, const Eigen::VectorXd & y) const;

  friend MahalanobisMetric build_metric(
    const DatasetStatistics & stats, double alpha, bool normalize);

private:
  MahalanobisMetric() = default;
  void factorize();

  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd factor_;
  double alpha_ = 0.0;
  bool normalized_ = false;
};

/// Throws InvalidArgument for alpha <= 0.
MahalanobisMetric build_metric(const DatasetStatistics & stats, double alpha, bool normalize = true);

double metric_inner(const MahalanobisMetric & metric, const Eigen::VectorXd & x,
  const Eigen::VectorXd & y);
double metric_distance(const MahalanobisMetric & metric, const Eigen::VectorXd & x,
  const Eigen::VectorXd & y);

/// Directory cache: mean.csv, covariance.csv and meta.json.
void save_statistics(const DatasetStatistics & stats, const std::filesystem::path & dir);
DatasetStatistics load_statistics(const std::filesystem::path & dir);

}  // namespace aps

#endif  // APS__STATISTICS_HPP_
