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

#include "aps/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "aps/csv.hpp"
#include "aps/error.hpp"
#include "aps/estimators.hpp"
#include "aps/nmse.hpp"
#include "aps/solvers.hpp"

namespace aps
{

const AlgorithmCurve & ResultTable::curve(const std::string & label) const
{
  for (const auto & c : curves) {
    if (c.label == label) {
      return c;
    }
  }
  fail(ErrorKind::InvalidArgument, "no algorithm labelled '" + label + "'");
}

ExperimentContext prepare_experiment(const ExperimentConfig & config)
{
  config.validate();
  const AngularGrid grid = build_grid(config.grid_lower_rad, config.grid_upper_rad,
    config.grid_points);
  ForwardOperator op = build_ula_operator(config.array, grid);

  Rng rng = make_rng(config.master_seed, kDatasetStream);
  std::vector<ApsVector> dataset;
  dataset.reserve(static_cast<std::size_t>(config.dataset_size));
  for (int i = 0; i < config.dataset_size; ++i) {
    dataset.push_back(sample_aps(config.aps_model_train, grid, rng));
  }
  DatasetStatistics stats = compute_statistics(dataset);
  const double norm = spectral_norm(stats.covariance);
  const double alpha = config.alpha.resolve(norm);
  MahalanobisMetric metric = build_metric(stats, alpha, config.normalize_metric);
  return ExperimentContext{std::move(op), std::move(stats), std::move(metric), norm, alpha};
}

int resolve_thread_count(int requested)
{
  if (requested > 0) {
    return requested;
  }
  if (const char * env = std::getenv("APS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) {
      return n;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace
{

struct TrialOutput
{
  // [algorithm][iteration]
  std::vector<std::vector<double>> nmse;
  std::vector<std::vector<double>> residual;
  std::vector<char> converged;
  std::vector<double> wall_ms;
};

// Extends a curve to `length` points by repeating its last value.
void pad(std::vector<double> & curve, std::size_t length)
{
  if (curve.empty()) {
    curve.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  curve.resize(length, curve.back());
}

TrialOutput run_trial(const ExperimentConfig & config, const ExperimentContext & ctx, int trial)
{
  Rng rng = make_rng(config.master_seed, kTrialStream, static_cast<std::uint64_t>(trial));
  const ApsVector truth = sample_aps(config.aps_model_test, ctx.op.grid(), rng);
  const HermitianToeplitzCovariance cov = true_covariance(ctx.op, truth);
  const HermitianToeplitzCovariance estimate =
    simulate_sample_covariance(cov, config.channel_sim, rng);
  const Eigen::VectorXd r = vectorize(estimate).entries;
  const Eigen::MatrixXd & a = ctx.op.matrix();
  const Eigen::VectorXd & t = truth.values();

  const std::size_t length = static_cast<std::size_t>(config.curve_length()) + 1;
  TrialOutput out;
  for (const auto & spec : config.algorithms) {
    std::vector<double> nmse_curve;
    std::vector<double> residual_curve;
    bool converged = true;
    const auto start = std::chrono::steady_clock::now();
    auto observe = [&](int, const Eigen::VectorXd & x) {
      nmse_curve.push_back(nmse(project_cone(x), t));
      residual_curve.push_back((a * x - r).norm());
    };

    switch (spec.kind) {
      case AlgorithmKind::Pocs: {
        const FeasibilityProblem problem(a, r);
        PocsOptions opts;
        opts.max_iterations = spec.iterations;
        opts.relaxation = spec.relaxation;
        opts.tolerance = spec.tolerance > 0.0 ? spec.tolerance : 1e-8;
        const auto res =
          pocs_baseline(problem, Eigen::VectorXd::Zero(a.cols()), opts, observe);
        converged = res.converged;
        break;
      }
      case AlgorithmKind::Haugazeau: {
        HaugazeauConfig hc;
        hc.gamma = spec.gamma;
        hc.max_iterations = spec.iterations;
        hc.fixed_point_tol = spec.tolerance;
        const auto res = haugazeau_estimate(ctx.metric, a, r, ctx.stats.mean, hc, nullptr, observe);
        converged = res.report.converged;
        break;
      }
      case AlgorithmKind::Regularized: {
        RegularizedConfig rc;
        rc.mu = spec.mu;
        const ApsVector est = regularized_estimate(ctx.metric, a, r, ctx.stats.mean, rc);
        observe(0, est.values());
        break;
      }
    }
    out.wall_ms.push_back(std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - start).count());
    pad(nmse_curve, length);
    pad(residual_curve, length);
    out.nmse.push_back(std::move(nmse_curve));
    out.residual.push_back(std::move(residual_curve));
    out.converged.push_back(converged ? 1 : 0);
  }
  return out;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig & config, const RunOptions & options)
{
  const ExperimentContext ctx = prepare_experiment(config);
  const int trials = config.num_trials;
  const int threads = std::min(resolve_thread_count(options.threads), trials);

  std::vector<std::optional<TrialOutput>> outputs(static_cast<std::size_t>(trials));
  std::vector<std::string> errors(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    for (int t = next++; t < trials; t = next++) {
      try {
        outputs[static_cast<std::size_t>(t)] = run_trial(config, ctx, t);
      } catch (const std::exception & e) {
        errors[static_cast<std::size_t>(t)] = e.what();
      }
      const int finished = ++done;
      if (options.progress && (finished % 10 == 0 || finished == trials)) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << config.name << ": " << finished << "/" << trials << " trials\n";
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
  }

  ResultTable table;
  table.name = config.name;
  table.covariance_norm = ctx.covariance_norm;
  table.alpha = ctx.alpha;
  for (int t = 0; t < trials; ++t) {
    if (outputs[static_cast<std::size_t>(t)]) {
      table.completed_trials.push_back(t);
    } else {
      table.failures.push_back({t, config.master_seed, errors[static_cast<std::size_t>(t)]});
      std::cerr << "warning: " << config.name << " trial " << t << " (master_seed "
                << config.master_seed << ") failed and is excluded: "
                << errors[static_cast<std::size_t>(t)] << '\n';
    }
  }
  if (table.completed_trials.empty()) {
    fail(ErrorKind::InvalidArgument, "every trial failed");
  }

  const std::size_t length = static_cast<std::size_t>(config.curve_length()) + 1;
  const double n = static_cast<double>(table.completed_trials.size());
  for (std::size_t alg = 0; alg < config.algorithms.size(); ++alg) {
    AlgorithmCurve curve;
    curve.label = config.algorithms[alg].label;
    curve.kind = config.algorithms[alg].kind;
    curve.mean_nmse.assign(length, 0.0);
    curve.stderr_nmse.assign(length, 0.0);
    curve.mean_feasibility_residual.assign(length, 0.0);
    for (int t : table.completed_trials) {
      const TrialOutput & o = *outputs[static_cast<std::size_t>(t)];
      for (std::size_t k = 0; k < length; ++k) {
        curve.mean_nmse[k] += o.nmse[alg][k];
        curve.mean_feasibility_residual[k] += o.residual[alg][k];
      }
      curve.trial_final_nmse.push_back(o.nmse[alg].back());
      curve.converged_trials += o.converged[alg];
      curve.mean_wall_ms += o.wall_ms[alg];
    }
    for (std::size_t k = 0; k < length; ++k) {
      curve.mean_nmse[k] /= n;
      curve.mean_feasibility_residual[k] /= n;
    }
    curve.mean_wall_ms /= n;
    if (n > 1.0) {
      for (std::size_t k = 0; k < length; ++k) {
        double ss = 0.0;
        for (int t : table.completed_trials) {
          const double d = (*outputs[static_cast<std::size_t>(t)]).nmse[alg][k] - curve.mean_nmse[k];
          ss += d * d;
        }
        curve.stderr_nmse[k] = std::sqrt(ss / (n - 1.0) / n);
      }
    }
    table.curves.push_back(std::move(curve));
  }

  if (options.write_outputs) {
    write_outputs(table, config.output_dir, config.write_plot);
  }
  return table;
}

void write_curves_csv(const ResultTable & table, std::ostream & out)
{
  out << "algorithm,iteration,mean_nmse,stderr_nmse,mean_feasibility_residual\n";
  for (const auto & c : table.curves) {
    for (std::size_t k = 0; k < c.mean_nmse.size(); ++k) {
      out << c.label << ',' << k << ',' << csv::format(c.mean_nmse[k]) << ','
          << csv::format(c.stderr_nmse[k]) << ',' << csv::format(c.mean_feasibility_residual[k])
          << '\n';
    }
  }
}

void write_results_csv(const ResultTable & table, std::ostream & out)
{
  out << "iteration";
  for (const auto & c : table.curves) {
    out << ',' << c.label;
  }
  out << '\n';
  const std::size_t length = table.curves.empty() ? 0 : table.curves.front().mean_nmse.size();
  for (std::size_t k = 0; k < length; ++k) {
    out << k;
    for (const auto & c : table.curves) {
      out << ',' << csv::format(c.mean_nmse[k]);
    }
    out << '\n';
  }
}

void write_summary_csv(const ResultTable & table, std::ostream & out)
{
  out << "algorithm,final_mean_nmse,final_stderr_nmse,converged_trials,completed_trials,alpha,"
         "covariance_norm\n";
  for (const auto & c : table.curves) {
    out << c.label << ',' << csv::format(c.final_mean()) << ',' << csv::format(c.final_stderr())
        << ',' << c.converged_trials << ',' << table.completed_trials.size() << ','
        << csv::format(table.alpha) << ',' << csv::format(table.covariance_norm) << '\n';
  }
}

void write_outputs(const ResultTable & table, const std::filesystem::path & dir, bool plot)
{
  std::filesystem::create_directories(dir);
  auto open = [&](const char * name) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) {
      fail(ErrorKind::Io, "cannot write " + (dir / name).string());
    }
    return out;
  };
  {
    auto out = open("results.csv");
    write_results_csv(table, out);
  }
  {
    auto out = open("curves.csv");
    write_curves_csv(table, out);
  }
  {
    auto out = open("summary.csv");
    write_summary_csv(table, out);
  }
  {
    auto out = open("trial_final_nmse.csv");
    out << "trial";
    for (const auto & c : table.curves) {
      out << ',' << c.label;
    }
    out << '\n';
    for (std::size_t i = 0; i < table.completed_trials.size(); ++i) {
      out << table.completed_trials[i];
      for (const auto & c : table.curves) {
        out << ',' << csv::format(c.trial_final_nmse[i]);
      }
      out << '\n';
    }
  }
  {
    // Wall-clock numbers vary run to run; kept apart from the reproducible files.
    auto out = open("timing.csv");
    out << "algorithm,mean_wall_ms_per_trial\n";
    for (const auto & c : table.curves) {
      out << c.label << ',' << c.mean_wall_ms << '\n';
    }
  }
  if (!table.failures.empty()) {
    auto out = open("failures.csv");
    out << "trial,master_seed,message\n";
    for (const auto & f : table.failures) {
      std::string msg = f.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      out << f.trial << ',' << f.seed << ',' << msg << '\n';
    }
  } else {
    std::filesystem::remove(dir / "failures.csv");
  }
  if (plot) {
    write_nmse_svg(table, dir / "nmse.svg");
  }
}

}  // namespace aps
