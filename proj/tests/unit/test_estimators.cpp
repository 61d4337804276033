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

#include <cmath>
#include <vector>

#include "aps/error.hpp"
#include "aps/estimators.hpp"
#include "aps/nmse.hpp"
#include "aps/solvers.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

namespace
{

using aps::testing::small_instance;

aps::HaugazeauConfig long_run(double gamma)
{
  aps::HaugazeauConfig cfg;
  cfg.gamma = gamma;
  cfg.max_iterations = 100000;
  return cfg;
}

}  // namespace

TEST_CASE("prox examples")
{
  std::mt19937_64 rng(1);
  const auto inst = small_instance(rng, 6, 3);
  const auto fixed = aps::prox_g(inst.metric, inst.a, inst.r, 5.0, inst.rho_true);
  CHECK((fixed.values() - inst.rho_true).norm() <= 1e-8);

  const Eigen::Vector3d r(1.0, 0.5, 2.0);
  const auto id = aps::MahalanobisMetric::identity(3);
  const auto y = aps::prox_g(id, Eigen::Matrix3d::Identity(), r, 2.0, r);
  CHECK((y.values() - r).norm() <= 1e-12);

  CHECK_THROWS_AS(aps::prox_g(id, Eigen::Matrix3d::Identity(), r, 0.0, r), aps::Error);
  CHECK_THROWS_AS(
    aps::prox_g(id, Eigen::Matrix3d::Identity(), Eigen::Vector2d::Zero(), 1.0, r), aps::Error);
}

TEST_CASE("prox matches a projected-gradient oracle")
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = small_instance(rng, 6, 3, trial % 2 == 0);
    const Eigen::VectorXd x = 2.0 * aps::testing::random_vector(rng, 6);
    const double gamma = 0.5 + trial;
    const auto got = aps::prox_g(inst.metric, inst.a, inst.r, gamma, x);
    const auto ref = aps::oracles::prox_by_projected_gradient(
      inst.a, inst.r, inst.metric.matrix(), gamma, x, 1000000, 1e-15);
    CHECK(inst.metric.distance(got.values(), ref.x) <= 1e-6);
  }
}

TEST_CASE("prox satisfies the KKT conditions of its quadratic program")
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = small_instance(rng, 12, 5, false);
    const aps::ProxMapping prox(inst.a, inst.r, inst.metric, 5.0);
    const Eigen::VectorXd x = aps::testing::random_vector(rng, 12);
    const auto sol = prox.solve(x);
    const Eigen::VectorXd c = prox.linear_term(x);
    CHECK(aps::kkt_violation_gram(prox.subproblem().q_matrix(), c, sol.solution) <=
      1e-9 * (1.0 + c.cwiseAbs().maxCoeff()));
    const Eigen::MatrixXd q = prox.subproblem().q_matrix();
    const Eigen::MatrixXd expected =
      inst.a.transpose() * inst.a + (0.1) * inst.metric.matrix();
    CHECK((q - expected).norm() <= 1e-12);
  }
}

TEST_CASE("warm starts do not change the prox")
{
  std::mt19937_64 rng(4);
  const auto inst = small_instance(rng, 30, 9, false);
  const aps::ProxMapping prox(inst.a, inst.r, inst.metric, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd x = aps::testing::random_vector(rng, 30);
    const Eigen::VectorXd warm = aps::testing::random_nonnegative(rng, 30);
    const auto cold = prox.solve(x);
    const auto hot = prox.solve(x, &warm);
    CHECK((cold.solution - hot.solution).norm() <= 1e-10);
  }
}

TEST_CASE("prox is firmly nonexpansive in the metric")
{
  std::mt19937_64 rng(5);
  const auto inst = small_instance(rng, 20, 7, false);
  const aps::ProxMapping prox(inst.a, inst.r, inst.metric, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = 3.0 * aps::testing::random_vector(rng, 20);
    const Eigen::VectorXd y = 3.0 * aps::testing::random_vector(rng, 20);
    const Eigen::VectorXd px = prox(x);
    const Eigen::VectorXd py = prox(y);
    const double lhs = inst.metric.inner(px - py, px - py);
    const double rhs = inst.metric.inner(px - py, x - y);
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("fixed points of the prox are exactly the NNLS solutions")
{
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = small_instance(rng, 8, 4, false);
    const aps::ProxMapping prox(inst.a, inst.r, inst.metric, 5.0);

    const auto sol = aps::nnls(inst.a, inst.r);
    CHECK(inst.metric.distance(prox(sol.solution), sol.solution) <= 1e-7);

    const Eigen::VectorXd off = sol.solution + 0.1 * aps::testing::random_nonnegative(rng, 8);
    CHECK(aps::kkt_violation(inst.a, inst.r, off) > 1e-6);
    CHECK(inst.metric.distance(prox(off), off) > 1e-7);

    Eigen::VectorXd x = aps::testing::random_vector(rng, 8);
    for (int k = 0; k < 200000 && inst.metric.distance(prox(x), x) > 1e-9; ++k) {
      x = prox(x);
    }
    REQUIRE(inst.metric.distance(prox(x), x) <= 1e-7);
    CHECK(aps::kkt_violation(inst.a, inst.r, x) <= 1e-6);
    CHECK((inst.a * x - inst.r).norm() == doctest::Approx(sol.residual_norm).epsilon(1e-6));
  }
}

TEST_CASE("haugazeau_q degenerate branches")
{
  const auto id = aps::MahalanobisMetric::identity(3);
  const Eigen::Vector3d x(1.0, 2.0, 3.0);
  const Eigen::Vector3d y(0.0, -1.0, 0.5);
  const Eigen::Vector3d z(2.0, 0.0, 1.0);
  CHECK(aps::haugazeau_q(id, x, y, y) == Eigen::VectorXd(y));
  CHECK(aps::haugazeau_q(id, x, x, z) == Eigen::VectorXd(z));

  const Eigen::Vector3d a(0.0, 0.0, 0.0);
  const Eigen::Vector3d b(1.0, 0.0, 0.0);
  try {
    aps::haugazeau_q(id, a, b, a);
    FAIL("expected an infeasibility error");
  } catch (const aps::Error & e) {
    CHECK(e.kind() == aps::ErrorKind::Infeasible);
  }
}

TEST_CASE("haugazeau_q projects onto two halfspaces")
{
  std::mt19937_64 rng(7);
  int second = 0;
  int third = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto metric = trial % 2 == 0
      ? aps::MahalanobisMetric::identity(5)
      : aps::MahalanobisMetric::from_matrix(aps::testing::random_spd(rng, 5));
    const Eigen::VectorXd x = aps::testing::random_vector(rng, 5);
    const Eigen::VectorXd y = aps::testing::random_vector(rng, 5);
    const Eigen::VectorXd z = aps::testing::random_vector(rng, 5);
    const Eigen::VectorXd got = aps::haugazeau_q(metric, x, y, z);
    const auto ref = aps::oracles::two_halfspace_projection(metric.matrix(), x, y, z);
    REQUIRE(ref.found);
    CHECK((got - ref.x).norm() <= 1e-9 * (1.0 + ref.x.norm()));

    const double chi = metric.inner(x - y, y - z);
    const double nu = metric.inner(y - z, y - z);
    const double delta = metric.inner(x - y, x - y) * nu - chi * chi;
    (chi * nu >= delta ? second : third)++;
  }
  CHECK(second > 0);
  CHECK(third > 0);
}

TEST_CASE("haugazeau stops immediately when rho_hat is a solution")
{
  std::mt19937_64 rng(8);
  const auto inst = small_instance(rng, 6, 3);
  const auto res =
    aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_true, aps::HaugazeauConfig{});
  CHECK(res.report.converged);
  CHECK(res.report.iterations == 0);
  CHECK((res.estimate.values() - inst.rho_true).norm() <= 1e-8);
}

TEST_CASE("haugazeau limit is the metric projection onto the solution set")
{
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = small_instance(rng, 6, 3);
    const auto ref = aps::oracles::hierarchical_projection_by_enumeration(
      inst.metric.matrix(), inst.a, inst.r, inst.rho_hat);
    REQUIRE(ref.found);
    std::vector<Eigen::VectorXd> limits;
    for (double gamma : {1.0, 5.0, 20.0}) {
      const auto res =
        aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, long_run(gamma));
      CHECK(inst.metric.distance(res.report.final_iterate, ref.x) <= 1e-4);
      limits.push_back(res.report.final_iterate);
    }
    CHECK(inst.metric.distance(limits[0], limits[1]) <= 1e-4);
    CHECK(inst.metric.distance(limits[0], limits[2]) <= 1e-4);
    CHECK(inst.metric.distance(limits[1], limits[2]) <= 1e-4);
  }
}

TEST_CASE("haugazeau estimate is feasible and satisfies the variational inequality")
{
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = small_instance(rng, 10, 4);
    const auto res =
      aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, long_run(5.0));
    const Eigen::VectorXd & star = res.estimate.values();
    CHECK((inst.a * star - inst.r).norm() <= 1e-4);
    CHECK(star.minCoeff() >= 0.0);

    const aps::FeasibilityProblem problem(inst.a, inst.r);
    aps::PocsOptions opts;
    opts.max_iterations = 100000;
    opts.tolerance = 1e-10;
    for (int s = 0; s < 10; ++s) {
      const auto pocs =
        aps::pocs_baseline(problem, 3.0 * aps::testing::random_vector(rng, 10), opts);
      REQUIRE(pocs.converged);
      const double vi = inst.metric.inner(inst.rho_hat - star, pocs.estimate.values() - star);
      CHECK(vi <= 1e-4);
    }
  }
}

TEST_CASE("haugazeau handles inconsistent measurements")
{
  std::mt19937_64 rng(11);
  const auto inst = small_instance(rng, 8, 4, false);
  const auto res =
    aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, long_run(5.0));
  const auto sol = aps::nnls(inst.a, inst.r);
  CHECK(sol.residual_norm > 1e-3);
  CHECK((inst.a * res.estimate.values() - inst.r).norm() ==
    doctest::Approx(sol.residual_norm).epsilon(1e-5));
  CHECK(res.estimate.values().minCoeff() >= 0.0);
}

TEST_CASE("haugazeau trace and determinism")
{
  std::mt19937_64 rng(12);
  const auto inst = small_instance(rng, 8, 4, false);
  aps::HaugazeauConfig cfg;
  cfg.max_iterations = 25;
  cfg.fixed_point_tol = 1e-300;
  int observed = 0;
  const auto a = aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, cfg,
    &inst.rho_true, [&](int k, const Eigen::VectorXd &) { CHECK(k == observed++); });
  CHECK_FALSE(a.report.converged);
  CHECK(a.report.iterations == 25);
  REQUIRE(a.report.trace.size() == 26);
  CHECK(observed == 26);
  CHECK(a.report.trace[0].nmse ==
    doctest::Approx(aps::nmse(aps::project_cone(inst.rho_hat), inst.rho_true)));
  for (std::size_t k = 0; k < a.report.trace.size(); ++k) {
    CHECK(a.report.trace[k].iteration == static_cast<int>(k));
    CHECK(a.report.trace[k].fixed_point_gap >= 0.0);
  }
  const auto b = aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, cfg);
  CHECK(a.report.final_iterate == b.report.final_iterate);
  CHECK(std::isnan(b.report.trace[0].nmse));

  cfg.fixed_point_tol = -1.0;
  CHECK_THROWS_AS(
    aps::haugazeau_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, cfg), aps::Error);
}

TEST_CASE("regularized estimate examples")
{
  std::mt19937_64 rng(13);
  const auto inst = small_instance(rng, 6, 3);
  aps::RegularizedConfig cfg;
  const auto same = aps::regularized_estimate(inst.metric, inst.a, inst.r, inst.rho_true, cfg);
  CHECK((same.values() - inst.rho_true).norm() <= 1e-8);

  const auto id = aps::MahalanobisMetric::identity(6);
  cfg.mu = 1e-12;
  const Eigen::VectorXd hat = aps::testing::random_vector(rng, 6);
  const auto clamp = aps::regularized_estimate(id, inst.a, inst.r, hat, cfg);
  CHECK((clamp.values() - aps::project_cone(hat)).norm() <= 1e-9);

  cfg.mu = 3.0;
  const auto reg = aps::regularized_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, cfg);
  const auto prox = aps::prox_g(inst.metric, inst.a, inst.r, 1.5, inst.rho_hat);
  CHECK(reg.values() == prox.values());

  cfg.mu = 0.0;
  CHECK_THROWS_AS(
    aps::regularized_estimate(inst.metric, inst.a, inst.r, inst.rho_hat, cfg), aps::Error);
}
