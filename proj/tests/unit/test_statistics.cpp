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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <vector>

#include "aps/error.hpp"
#include "aps/statistics.hpp"
#include "helpers.hpp"

namespace
{

std::vector<Eigen::VectorXd> random_dataset(std::mt19937_64 & rng, int count, Eigen::Index dim)
{
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(aps::testing::random_nonnegative(rng, dim));
  }
  return out;
}

aps::DatasetStatistics diagonal_stats(const Eigen::VectorXd & diag)
{
  aps::DatasetStatistics stats;
  stats.mean = Eigen::VectorXd::Zero(diag.size());
  stats.covariance = diag.asDiagonal();
  stats.sample_count = 2;
  return stats;
}

}  // namespace

TEST_CASE("compute_statistics examples")
{
  const Eigen::Vector3d v(1.0, 2.0, 0.5);
  const std::vector<Eigen::VectorXd> same{v, v};
  const auto s = aps::compute_statistics(same);
  CHECK(s.mean == Eigen::VectorXd(v));
  CHECK(s.covariance.isZero(0.0));
  CHECK(s.sample_count == 2);

  const std::vector<Eigen::VectorXd> basis{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  const auto b = aps::compute_statistics(basis);
  CHECK(b.mean.isApprox(Eigen::Vector2d(0.5, 0.5)));
  Eigen::Matrix2d expected;
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK(b.covariance.isApprox(expected));

  const std::vector<Eigen::VectorXd> one{v};
  try {
    aps::compute_statistics(one);
    FAIL("expected an error");
  } catch (const aps::Error & e) {
    CHECK(e.kind() == aps::ErrorKind::InsufficientSamples);
  }
  const std::vector<Eigen::VectorXd> ragged{v, Eigen::Vector2d(1, 1)};
  CHECK_THROWS_AS(aps::compute_statistics(ragged), aps::Error);
}

TEST_CASE("compute_statistics matches a two-pass oracle")
{
  std::mt19937_64 rng(2);
  const auto data = random_dataset(rng, 37, 5);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
  for (const auto & x : data) {
    mean += x;
  }
  mean /= 37.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(5, 5);
  for (const auto & x : data) {
    cov += (x - mean) * (x - mean).transpose();
  }
  cov /= 36.0;
  const auto s = aps::compute_statistics(data);
  CHECK((s.mean - mean).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((s.covariance - cov).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((s.covariance - s.covariance.transpose()).norm() == 0.0);

  std::vector<aps::ApsVector> typed;
  for (const auto & x : data) {
    typed.emplace_back(x);
  }
  const auto t = aps::compute_statistics(typed);
  CHECK(t.mean == s.mean);
  CHECK(t.covariance == s.covariance);
}

TEST_CASE("build_metric examples")
{
  const auto id = aps::build_metric(diagonal_stats(Eigen::Vector2d(0, 0)), 1.0, false);
  CHECK(id.matrix().isApprox(Eigen::Matrix2d::Identity()));

  const auto m = aps::build_metric(diagonal_stats(Eigen::Vector2d(3, 1)), 1.0, false);
  CHECK(m.matrix()(0, 0) == doctest::Approx(0.25));
  CHECK(m.matrix()(1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(m.matrix()(0, 1)) < 1e-15);
  CHECK_FALSE(m.normalized());
  CHECK(m.alpha() == 1.0);

  const auto n = aps::build_metric(diagonal_stats(Eigen::Vector2d(3, 1)), 1.0, true);
  CHECK(n.matrix()(0, 0) == doctest::Approx(0.5));
  CHECK(n.matrix()(1, 1) == doctest::Approx(1.0));
  CHECK(n.normalized());

  CHECK_THROWS_AS(aps::build_metric(diagonal_stats(Eigen::Vector2d(3, 1)), 0.0), aps::Error);
  CHECK_THROWS_AS(aps::build_metric(diagonal_stats(Eigen::Vector2d(3, 1)), -1.0), aps::Error);
}

TEST_CASE("spectral fraction alpha gives a unit-norm positive-definite metric")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto stats = aps::compute_statistics(random_dataset(rng, 30, 12));
    const double norm_c = aps::spectral_norm(stats.covariance);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ce(stats.covariance);
    CHECK(norm_c == doctest::Approx(ce.eigenvalues().maxCoeff()).epsilon(1e-12));
    for (double divisor : {1.0, 100.0}) {
      const auto m = aps::build_metric(stats, norm_c / divisor, true);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> me(m.matrix());
      CHECK(me.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(me.eigenvalues().minCoeff() > 0.0);
      CHECK((m.matrix() - m.matrix().transpose()).norm() == 0.0);
      const Eigen::MatrixXd l = m.cholesky_factor();
      CHECK((l * l.transpose() - m.matrix()).norm() <= 1e-12);
      CHECK(l.isLowerTriangular());
    }
  }
}

TEST_CASE("large alpha approaches the identity")
{
  std::mt19937_64 rng(6);
  const auto stats = aps::compute_statistics(random_dataset(rng, 40, 10));
  const double norm_c = aps::spectral_norm(stats.covariance);
  const auto m = aps::build_metric(stats, 1e6 * norm_c, true);
  const Eigen::MatrixXd diff = m.matrix() - Eigen::MatrixXd::Identity(10, 10);
  CHECK(aps::spectral_norm(diff * diff.transpose()) < 1e-6);  // (1e-3)^2

  const auto small = aps::build_metric(stats, norm_c / 100.0, true);
  const Eigen::MatrixXd far = small.matrix() - Eigen::MatrixXd::Identity(10, 10);
  CHECK(std::sqrt(aps::spectral_norm(far * far.transpose())) > 1e-3);
}

TEST_CASE("metric inner product and distance")
{
  std::mt19937_64 rng(8);
  const auto stats = aps::compute_statistics(random_dataset(rng, 30, 7));
  const auto m = aps::build_metric(stats, aps::spectral_norm(stats.covariance) / 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = aps::testing::random_vector(rng, 7);
    const Eigen::VectorXd y = aps::testing::random_vector(rng, 7);
    const Eigen::VectorXd z = aps::testing::random_vector(rng, 7);
    const double a = 1.7;
    const double b = -0.3;
    CHECK(aps::metric_inner(m, x, y) == doctest::Approx(aps::metric_inner(m, y, x)).epsilon(1e-13));
    CHECK(aps::metric_inner(m, a * x + b * z, y) ==
      doctest::Approx(a * aps::metric_inner(m, x, y) + b * aps::metric_inner(m, z, y))
        .epsilon(1e-12));
    CHECK(aps::metric_distance(m, x, x) == 0.0);
    const double d = aps::metric_distance(m, x, y);
    CHECK(d >= 0.0);
    const double chol = (m.cholesky_factor().transpose() * (x - y)).squaredNorm();
    CHECK(d * d == doctest::Approx(chol).epsilon(1e-12));
    CHECK(m.norm(x) == doctest::Approx(std::sqrt(m.inner(x, x))).epsilon(1e-14));
  }

  const auto e = aps::MahalanobisMetric::identity(7);
  const Eigen::VectorXd x = aps::testing::random_vector(rng, 7);
  const Eigen::VectorXd y = aps::testing::random_vector(rng, 7);
  CHECK(aps::metric_distance(e, x, y) == doctest::Approx((x - y).norm()).epsilon(1e-14));
  CHECK_THROWS_AS(aps::metric_inner(e, x, Eigen::VectorXd::Zero(3)), aps::Error);
}

TEST_CASE("from_matrix rejects indefinite input")
{
  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(aps::MahalanobisMetric::from_matrix(bad), aps::Error);
  CHECK_NOTHROW(aps::MahalanobisMetric::from_matrix(Eigen::Matrix2d::Identity()));
}

TEST_CASE("statistics cache round trip")
{
  std::mt19937_64 rng(10);
  const auto stats = aps::compute_statistics(random_dataset(rng, 12, 6));
  const auto dir = std::filesystem::temp_directory_path() / "aps_test_statistics";
  aps::save_statistics(stats, dir);
  const auto back = aps::load_statistics(dir);
  CHECK(back.mean == stats.mean);
  CHECK(back.covariance == stats.covariance);
  CHECK(back.sample_count == stats.sample_count);
  std::filesystem::remove_all(dir);
}
