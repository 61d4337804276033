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

#include "aps/statistics.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "aps/csv.hpp"
#include "aps/error.hpp"

namespace aps
{

DatasetStatistics compute_statistics(std::span<const Eigen::VectorXd> dataset)
{
  require(dataset.size() >= 2, ErrorKind::InsufficientSamples,
    "covariance needs at least two samples");
  const Eigen::Index d = dataset.front().size();
  for (const auto & s : dataset) {
    require(s.size() == d, ErrorKind::DimensionMismatch, "dataset samples differ in length");
  }

  DatasetStatistics stats;
  stats.sample_count = dataset.size();
  const double count = static_cast<double>(dataset.size());

  stats.mean = Eigen::VectorXd::Zero(d);
  for (const auto & s : dataset) {
    stats.mean += s;
  }
  stats.mean /= count;

  stats.covariance = Eigen::MatrixXd::Zero(d, d);
  for (const auto & s : dataset) {
    const Eigen::VectorXd centered = s - stats.mean;
    stats.covariance.selfadjointView<Eigen::Lower>().rankUpdate(centered);
  }
  stats.covariance = stats.covariance.selfadjointView<Eigen::Lower>();
  stats.covariance /= count - 1.0;
  return stats;
}

DatasetStatistics compute_statistics(std::span<const ApsVector> dataset)
{
  std::vector<Eigen::VectorXd> values;
  values.reserve(dataset.size());
  bool warned = false;
  for (const auto & s : dataset) {
    if (!warned && (s.values().array() < 0.0).any()) {
      std::cerr << "warning: dataset contains negative APS entries\n";
      warned = true;
    }
    values.push_back(s.values());
  }
  return compute_statistics(std::span<const Eigen::VectorXd>(values));
}

double spectral_norm(const Eigen::MatrixXd & symmetric)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::FactorizationFailure, "eigenvalue computation failed");
  }
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

void MahalanobisMetric::factorize()
{
  Eigen::LLT<Eigen::MatrixXd> llt(matrix_);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::FactorizationFailure, "metric matrix is not positive definite");
  }
  factor_ = llt.matrixL();
}

MahalanobisMetric MahalanobisMetric::from_matrix(Eigen::MatrixXd matrix)
{
  require(matrix.rows() == matrix.cols(), ErrorKind::DimensionMismatch, "metric must be square");
  MahalanobisMetric m;
  m.matrix_ = 0.5 * (matrix + matrix.transpose());
  m.factorize();
  return m;
}

MahalanobisMetric MahalanobisMetric::identity(Eigen::Index dimension)
{
  return from_matrix(Eigen::MatrixXd::Identity(dimension, dimension));
}

MahalanobisMetric build_metric(const DatasetStatistics & stats, double alpha, bool normalize)
{
  require(alpha > 0.0 && std::isfinite(alpha), ErrorKind::InvalidArgument, "alpha must be > 0");
  require(stats.covariance.rows() == stats.covariance.cols(), ErrorKind::DimensionMismatch,
    "covariance must be square");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(stats.covariance);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::FactorizationFailure, "eigendecomposition of the covariance failed");
  }
  // Roundoff can leave tiny negative eigenvalues in a PSD covariance.
  Eigen::VectorXd inv = (eig.eigenvalues().cwiseMax(0.0).array() + alpha).inverse();
  if (normalize) {
    inv /= inv.maxCoeff();
  }
  const Eigen::MatrixXd & v = eig.eigenvectors();
  Eigen::MatrixXd m = v * inv.asDiagonal() * v.transpose();

  MahalanobisMetric metric;
  metric.matrix_ = 0.5 * (m + m.transpose());
  metric.alpha_ = alpha;
  metric.normalized_ = normalize;
  metric.factorize();
  return metric;
}

double MahalanobisMetric::inner(const Eigen::VectorXd & x, const Eigen::VectorXd & y) const
{
  require(x.size() == dimension() && y.size() == dimension(), ErrorKind::DimensionMismatch,
    "vector length does not match the metric");
  return x.dot(matrix_ * y);
}

double MahalanobisMetric::norm(const Eigen::VectorXd & x) const
{
  require(x.size() == dimension(), ErrorKind::DimensionMismatch,
    "vector length does not match the metric");
  return (factor_.transpose() * x).norm();
}

double MahalanobisMetric::distance(const Eigen::VectorXd & x, const Eigen::VectorXd & y) const
{
  require(x.size() == dimension() && y.size() == dimension(), ErrorKind::DimensionMismatch,
    "vector length does not match the metric");
  return norm(x - y);
}

double metric_inner(
  const MahalanobisMetric & metric, const Eigen::VectorXd & x, const Eigen::VectorXd & y)
{
  return metric.inner(x, y);
}

double metric_distance(
  const MahalanobisMetric & metric, const Eigen::VectorXd & x, const Eigen::VectorXd & y)
{
  return metric.distance(x, y);
}

void save_statistics(const DatasetStatistics & stats, const std::filesystem::path & dir)
{
  std::filesystem::create_directories(dir);
  csv::write_vector(dir / "mean.csv", stats.mean);
  csv::write_matrix(dir / "covariance.csv", stats.covariance);
  nlohmann::ordered_json meta;
  meta["format"] = "aps-statistics";
  meta["version"] = 1;
  meta["num_points"] = stats.mean.size();
  meta["sample_count"] = stats.sample_count;
  std::ofstream out(dir / "meta.json", std::ios::trunc);
  out << meta.dump(2) << '\n';
}

DatasetStatistics load_statistics(const std::filesystem::path & dir)
{
  DatasetStatistics stats;
  stats.mean = csv::read_vector(dir / "mean.csv");
  stats.covariance = csv::read_matrix(dir / "covariance.csv");
  std::ifstream meta_in(dir / "meta.json");
  if (meta_in) {
    try {
      const auto meta = nlohmann::json::parse(meta_in);
      stats.sample_count = meta.value("sample_count", std::size_t{0});
    } catch (const nlohmann::json::exception & e) {
      fail(ErrorKind::Parse, (dir / "meta.json").string() + ": " + e.what());
    }
  }
  require(stats.covariance.rows() == stats.mean.size() &&
            stats.covariance.cols() == stats.mean.size(),
    ErrorKind::DimensionMismatch, "cached mean and covariance disagree in dimension");
  return stats;
}

}  // namespace aps
