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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "aps/estimators.hpp"
#include "aps/experiment.hpp"
#include "aps/forward_model.hpp"
#include "aps/solvers.hpp"
#include "aps/synthesis.hpp"

namespace
{

// One test draw on the default full-size setup, shared by every benchmark.
struct Scene
{
  aps::ExperimentContext context;
  Eigen::VectorXd truth;
  Eigen::VectorXd r;

  static const Scene & get()
  {
    static const Scene scene = [] {
      aps::ExperimentConfig config;
      config.algorithms = aps::default_algorithms();
      config.aps_model_train.angle_low_rad = 0.0;
      config.aps_model_train.angle_high_rad = std::numbers::pi / 2.0;
      config.aps_model_test = config.aps_model_train;
      Scene s{aps::prepare_experiment(config), {}, {}};
      auto rng = aps::make_rng(config.master_seed, aps::kTrialStream);
      const auto truth = aps::sample_aps(config.aps_model_test, s.context.op.grid(), rng);
      s.truth = truth.values();
      s.r = aps::vectorize(aps::simulate_sample_covariance(
        aps::true_covariance(s.context.op, truth), config.channel_sim, rng)).entries;
      return s;
    }();
    return scene;
  }
};

void BM_Apply(benchmark::State & state)
{
  const auto & s = Scene::get();
  for (auto _ : state) {
    benchmark::DoNotOptimize(aps::apply(s.context.op, s.truth));
  }
}
BENCHMARK(BM_Apply);

void BM_Nnls(benchmark::State & state)
{
  const auto & s = Scene::get();
  for (auto _ : state) {
    benchmark::DoNotOptimize(aps::nnls(s.context.op.matrix(), s.r));
  }
}
BENCHMARK(BM_Nnls)->Unit(benchmark::kMillisecond);

void BM_Prox(benchmark::State & state)
{
  const auto & s = Scene::get();
  const aps::ProxMapping prox(s.context.op.matrix(), s.r, s.context.metric, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox.solve(s.context.stats.mean));
  }
}
BENCHMARK(BM_Prox)->Unit(benchmark::kMillisecond);

void BM_Haugazeau(benchmark::State & state)
{
  const auto & s = Scene::get();
  aps::HaugazeauConfig config;
  config.max_iterations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aps::haugazeau_estimate(
      s.context.metric, s.context.op.matrix(), s.r, s.context.stats.mean, config));
  }
}
BENCHMARK(BM_Haugazeau)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Pocs(benchmark::State & state)
{
  const auto & s = Scene::get();
  const aps::FeasibilityProblem problem(s.context.op.matrix(), s.r);
  aps::PocsOptions options;
  options.max_iterations = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
      aps::pocs_baseline(problem, Eigen::VectorXd::Zero(s.truth.size()), options));
  }
}
BENCHMARK(BM_Pocs)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
