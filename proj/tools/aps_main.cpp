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

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aps/csv.hpp"
#include "aps/error.hpp"
#include "aps/estimators.hpp"
#include "aps/experiment.hpp"
#include "aps/forward_model.hpp"
#include "aps/nmse.hpp"
#include "aps/solvers.hpp"
#include "aps/statistics.hpp"
#include "aps/synthesis.hpp"
#include "oracles.hpp"

namespace
{

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path & path)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    aps::fail(aps::ErrorKind::Io, "cannot write " + path.string());
  }
  return out;
}

// Grid and model settings shared by generate-dataset, build-operator and simulate-covariance.
struct SceneOptions
{
  std::string config;
  int antennas = 16;
  double carrier_hz = 2.11e9;
  std::optional<double> spacing_m;
  double lower = -std::numbers::pi / 2.0;
  double upper = std::numbers::pi / 2.0;
  Eigen::Index points = 180;
  std::optional<double> angle_low;
  std::optional<double> angle_high;
  std::optional<double> spread;

  void add_array(CLI::App * app)
  {
    app->add_option("--antennas", antennas, "Number of ULA elements")->check(CLI::PositiveNumber);
    app->add_option("--carrier", carrier_hz, "Carrier frequency in Hz");
    app->add_option("--spacing", spacing_m, "Antenna spacing in metres (default half wavelength)");
  }

  void add_grid(CLI::App * app)
  {
    app->add_option("--config", config, "Experiment file providing array, grid and model")
      ->check(CLI::ExistingFile);
    app->add_option("--points", points, "Number of grid points");
    app->add_option("--lower", lower, "Lower grid bound in radians");
    app->add_option("--upper", upper, "Upper grid bound in radians");
  }

  void add_model(CLI::App * app)
  {
    app->add_option("--angle-low", angle_low, "Lower bound of path centres in radians");
    app->add_option("--angle-high", angle_high, "Upper bound of path centres in radians");
    app->add_option("--spread", spread, "Per-path angular spread in radians");
  }

  aps::ExperimentConfig resolve() const
  {
    aps::ExperimentConfig c;
    if (!config.empty()) {
      c = aps::load_experiment_config(config);
    } else {
      c.array.num_antennas = antennas;
      c.array.carrier_frequency_hz = carrier_hz;
      c.array.antenna_spacing_m = spacing_m;
      c.grid_lower_rad = lower;
      c.grid_upper_rad = upper;
      c.grid_points = points;
    }
    for (auto * model : {&c.aps_model_train, &c.aps_model_test}) {
      if (angle_low) {
        model->angle_low_rad = *angle_low;
      }
      if (angle_high) {
        model->angle_high_rad = *angle_high;
      }
      if (spread) {
        model->spread_rad = *spread;
      }
    }
    return c;
  }
};

struct DatasetCommand
{
  SceneOptions scene;
  int count = 1000;
  std::uint64_t seed = 1;
  fs::path out = "dataset.csv";
  fs::path stats_out;

  void attach(CLI::App & app)
  {
    auto * cmd = app.add_subcommand("generate-dataset", "Sample training spectra to CSV");
    scene.add_grid(cmd);
    scene.add_model(cmd);
    cmd->add_option("--count", count, "Number of spectra")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--out", out, "Output CSV (metadata goes to <out>.meta.json)");
    cmd->add_option("--stats-out", stats_out, "Also write mean/covariance to this directory");
    cmd->callback([this] { run(); });
  }

  void run() const
  {
    const auto c = scene.resolve();
    const auto grid = aps::build_grid(c.grid_lower_rad, c.grid_upper_rad, c.grid_points);
    c.aps_model_train.validate(grid);
    auto rng = aps::make_rng(seed, aps::kDatasetStream);
    std::vector<aps::ApsVector> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      samples.push_back(aps::sample_aps(c.aps_model_train, grid, rng));
    }
    const aps::DatasetMetadata meta{grid.lower_rad(), grid.upper_rad(), grid.num_points(),
      c.aps_model_train, seed, samples.size()};
    if (out.has_parent_path()) {
      fs::create_directories(out.parent_path());
    }
    aps::write_dataset(out, samples, meta);
    if (!stats_out.empty()) {
      aps::save_statistics(aps::compute_statistics(samples), stats_out);
    }
    std::cerr << "wrote " << count << " spectra to " << out.string() << '\n';
  }
};

struct OperatorCommand
{
  SceneOptions scene;
  fs::path out = "operator.bin";
  fs::path csv_out;

  void attach(CLI::App & app)
  {
    auto * cmd = app.add_subcommand("build-operator", "Build and cache the ULA forward operator");
    scene.add_array(cmd);
    scene.add_grid(cmd);
    cmd->add_option("--out", out, "Binary operator file");
    cmd->add_option("--csv", csv_out, "Also write a human-readable CSV dump");
    cmd->callback([this] { run(); });
  }

  void run() const
  {
    const auto c = scene.resolve();
    const auto op = aps::build_ula_operator(
      c.array, aps::build_grid(c.grid_lower_rad, c.grid_upper_rad, c.grid_points));
    if (out.has_parent_path()) {
      fs::create_directories(out.parent_path());
    }
    aps::save_operator(op, out);
    if (!csv_out.empty()) {
      aps::save_operator_csv(op, csv_out);
    }
    std::cerr << "wrote " << op.num_rows() << "x" << op.num_columns() << " operator to "
              << out.string() << '\n';
  }
};

struct SimulateCommand
{
  SceneOptions scene;
  fs::path operator_path;
  std::uint64_t seed = 1;
  int snapshots = 500;
  double noise = 0.1;
  std::string symbols = "unit-modulus-random-phase";
  fs::path out = "covariance.csv";
  fs::path truth_out = "truth.csv";

  void attach(CLI::App & app)
  {
    auto * cmd = app.add_subcommand("simulate-covariance",
      "Draw a test spectrum and write its vectorized sample covariance");
    cmd->add_option("--operator", operator_path, "Operator file from build-operator")
      ->required()
      ->check(CLI::ExistingFile);
    scene.add_model(cmd);
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--snapshots", snapshots, "Number of snapshots K")->check(CLI::PositiveNumber);
    cmd->add_option("--noise", noise, "Noise variance");
    cmd->add_option("--symbols", symbols, "unit-modulus-random-phase or complex-gaussian");
    cmd->add_option("--out", out, "Vectorized covariance CSV");
    cmd->add_option("--truth-out", truth_out, "Drawn spectrum CSV");
    cmd->callback([this] { run(); });
  }

  void run() const
  {
    const auto op = aps::load_operator(operator_path);
    const auto c = scene.resolve();
    aps::ChannelSimConfig sim;
    sim.num_snapshots = snapshots;
    sim.noise_variance = noise;
    sim.symbol_model = aps::parse_symbol_model(symbols);
    auto rng = aps::make_rng(seed, aps::kTrialStream);
    const auto truth = aps::sample_aps(c.aps_model_test, op.grid(), rng);
    const auto est =
      aps::simulate_sample_covariance(aps::true_covariance(op, truth), sim, rng);
    aps::csv::write_vector(out, aps::vectorize(est).entries);
    aps::csv::write_vector(truth_out, truth.values());
  }
};

struct EstimateCommand
{
  fs::path operator_path;
  fs::path covariance_path;
  fs::path stats_dir;
  fs::path dataset_path;
  fs::path truth_path;
  std::string algorithm = "haugazeau";
  double gamma = 5.0;
  double mu = 5e4;
  int iterations = 500;
  double tolerance = 0.0;
  double alpha_divisor = 100.0;
  std::optional<double> alpha;
  bool no_normalize = false;
  fs::path out = "aps_estimate.csv";
  fs::path trace;

  void attach(CLI::App & app)
  {
    auto * cmd = app.add_subcommand("estimate", "Estimate a spectrum from one covariance vector");
    cmd->add_option("--operator", operator_path, "Operator file from build-operator")
      ->required()
      ->check(CLI::ExistingFile);
    cmd->add_option("--covariance", covariance_path, "Vectorized covariance CSV (2N-1 values)")
      ->required()
      ->check(CLI::ExistingFile);
    auto * stats = cmd->add_option("--stats", stats_dir, "Statistics directory")
      ->check(CLI::ExistingDirectory);
    auto * data = cmd->add_option("--dataset", dataset_path, "Training dataset CSV")
      ->check(CLI::ExistingFile);
    stats->excludes(data);
    cmd->add_option("--algorithm", algorithm, "haugazeau, regularized, pocs or nnls")
      ->check(CLI::IsMember({"haugazeau", "regularized", "pocs", "nnls"}));
    cmd->add_option("--gamma", gamma, "Haugazeau prox step")->check(CLI::PositiveNumber);
    cmd->add_option("--mu", mu, "Regularized data weight")->check(CLI::PositiveNumber);
    cmd->add_option("--iterations", iterations, "Iteration budget")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tolerance", tolerance, "Stopping tolerance (0: automatic)");
    auto * div = cmd->add_option("--alpha-divisor", alpha_divisor, "alpha = ||C||_2 / divisor")
      ->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", alpha, "Absolute alpha")->excludes(div);
    cmd->add_flag("--no-normalize", no_normalize, "Keep the metric unscaled");
    cmd->add_option("--truth", truth_path, "Ground-truth spectrum CSV; adds NMSE to the trace")
      ->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "Estimate CSV");
    cmd->add_option("--trace", trace, "Per-iteration trace CSV");
    cmd->callback([this] { run(); });
  }

  aps::DatasetStatistics statistics() const
  {
    if (!stats_dir.empty()) {
      return aps::load_statistics(stats_dir);
    }
    if (!dataset_path.empty()) {
      return aps::compute_statistics(aps::read_dataset(dataset_path));
    }
    aps::fail(aps::ErrorKind::InvalidArgument,
      "--algorithm " + algorithm + " needs --stats or --dataset");
  }

  void run() const
  {
    const auto op = aps::load_operator(operator_path);
    const Eigen::VectorXd r = aps::csv::read_vector(covariance_path);
    aps::require(r.size() == op.num_rows(), aps::ErrorKind::DimensionMismatch,
      "covariance vector length does not match the operator");
    std::optional<Eigen::VectorXd> truth;
    if (!truth_path.empty()) {
      truth = aps::csv::read_vector(truth_path);
      aps::require(truth->size() == op.num_columns(), aps::ErrorKind::DimensionMismatch,
        "truth length does not match the operator");
    }
    const Eigen::MatrixXd & a = op.matrix();
    auto nmse_of = [&](const Eigen::VectorXd & x) {
      return truth ? aps::nmse(aps::project_cone(x), *truth)
                   : std::numeric_limits<double>::quiet_NaN();
    };

    Eigen::VectorXd estimate;
    std::optional<std::ofstream> trace_out;
    if (!trace.empty()) {
      trace_out.emplace(open_out(trace));
    }

    if (algorithm == "pocs") {
      aps::PocsOptions opts;
      opts.max_iterations = iterations;
      if (tolerance > 0.0) {
        opts.tolerance = tolerance;
      }
      const auto res = aps::pocs_baseline(
        aps::FeasibilityProblem(a, r), Eigen::VectorXd::Zero(a.cols()), opts);
      estimate = res.estimate.values();
      if (trace_out) {
        *trace_out << "iteration,residual,min_entry,distance_to_affine\n";
        for (const auto & e : res.trace) {
          *trace_out << e.iteration << ',' << aps::csv::format(e.residual) << ','
                     << aps::csv::format(e.min_entry) << ','
                     << aps::csv::format(e.distance_to_affine) << '\n';
        }
      }
      std::cerr << "pocs: " << res.iterations << " iterations, converged=" << res.converged
                << '\n';
    } else if (algorithm == "nnls") {
      const auto res = aps::nnls(a, r);
      estimate = res.solution;
      if (trace_out) {
        *trace_out << "iteration,nmse,feasibility_residual\n0," << aps::csv::format(nmse_of(estimate))
                   << ',' << aps::csv::format(res.residual_norm) << '\n';
      }
    } else {
      const auto stats = statistics();
      aps::require(stats.mean.size() == op.num_columns(), aps::ErrorKind::DimensionMismatch,
        "statistics dimension does not match the operator");
      const double norm = aps::spectral_norm(stats.covariance);
      const double a_value = alpha ? *alpha : norm / alpha_divisor;
      const auto metric = aps::build_metric(stats, a_value, !no_normalize);
      if (algorithm == "haugazeau") {
        aps::HaugazeauConfig cfg;
        cfg.gamma = gamma;
        cfg.max_iterations = iterations;
        cfg.fixed_point_tol = tolerance;
        const auto res = aps::haugazeau_estimate(
          metric, a, r, stats.mean, cfg, truth ? &*truth : nullptr);
        estimate = res.estimate.values();
        if (trace_out) {
          *trace_out << "iteration,nmse,feasibility_residual,fixed_point_gap,elapsed_ms\n";
          for (const auto & e : res.report.trace) {
            *trace_out << e.iteration << ',' << aps::csv::format(e.nmse) << ','
                       << aps::csv::format(e.feasibility_residual) << ','
                       << aps::csv::format(e.fixed_point_gap) << ',' << e.elapsed_ms << '\n';
          }
        }
        std::cerr << "haugazeau: " << res.report.iterations
                  << " iterations, converged=" << res.report.converged << '\n';
      } else {
        aps::RegularizedConfig cfg;
        cfg.mu = mu;
        estimate = aps::regularized_estimate(metric, a, r, stats.mean, cfg).values();
        if (trace_out) {
          *trace_out << "iteration,nmse,feasibility_residual\n0,"
                     << aps::csv::format(nmse_of(estimate)) << ','
                     << aps::csv::format((a * estimate - r).norm()) << '\n';
        }
      }
    }
    aps::csv::write_vector(out, estimate);
    if (truth) {
      std::cerr << "nmse: " << aps::nmse(estimate, *truth) << '\n';
    }
  }
};

struct ExperimentCommand
{
  fs::path config;
  fs::path out;
  int threads = 0;
  int trials = 0;
  std::optional<std::uint64_t> seed;
  bool no_plot = false;
  bool quiet = false;

  void attach(CLI::App & app)
  {
    auto * cmd = app.add_subcommand("run-experiment", "Run a Monte Carlo experiment");
    cmd->add_option("--config", config, "Experiment TOML file")
      ->required()
      ->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "Output directory (default: the config's output_dir)");
    cmd->add_option("--threads", threads, "Worker threads (default: APS_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
    cmd->add_option("--trials", trials, "Override num_trials")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "Override master_seed");
    cmd->add_flag("--no-plot", no_plot, "Skip the SVG plot");
    cmd->add_flag("--quiet", quiet, "No progress output");
    cmd->callback([this] { run(); });
  }

  void run() const
  {
    auto c = aps::load_experiment_config(config);
    if (!out.empty()) {
      c.output_dir = out;
    }
    if (trials > 0) {
      c.num_trials = trials;
    }
    if (seed) {
      c.master_seed = *seed;
    }
    if (no_plot) {
      c.write_plot = false;
    }
    aps::RunOptions options;
    options.threads = threads;
    options.progress = !quiet;
    const auto table = aps::run_experiment(c, options);
    aps::write_summary_csv(table, std::cout);
    std::cerr << "results in " << c.output_dir.string() << '\n';
  }
};

struct OracleCommand
{
  std::uint64_t seed = 1;
  int instances = 10;
  std::string kind = "all";
  fs::path out;
  int failures = 0;

  void attach(CLI::App & app)
  {
    auto * cmd = app.add_subcommand("oracle",
      "Compare the solvers with brute-force oracles on small random instances");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--instances", instances, "Instances per check")->check(CLI::PositiveNumber);
    cmd->add_option("--kind", kind, "nnls, prox, haugazeau or all")
      ->check(CLI::IsMember({"nnls", "prox", "haugazeau", "all"}));
    cmd->add_option("--out", out, "CSV of per-instance discrepancies");
    cmd->callback([this] { run(); });
  }

  static Eigen::MatrixXd gaussian(std::mt19937_64 & rng, Eigen::Index rows, Eigen::Index cols)
  {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = g(rng);
    }
    return m;
  }

  static aps::MahalanobisMetric random_metric(std::mt19937_64 & rng, Eigen::Index n)
  {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(rng, n, n));
    const Eigen::MatrixXd q = qr.householderQ();
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Eigen::VectorXd eig(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      eig[i] = u(rng);
    }
    Eigen::MatrixXd m = q * eig.asDiagonal() * q.transpose();
    return aps::MahalanobisMetric::from_matrix(0.5 * (m + m.transpose()));
  }

  void run()
  {
    std::mt19937_64 rng(seed);
    std::optional<std::ofstream> csv;
    if (!out.empty()) {
      csv.emplace(open_out(out));
      *csv << "check,instance,discrepancy,tolerance\n";
    }
    auto report = [&](const char * check, int i, double value, double tol) {
      const bool ok = value <= tol;
      failures += ok ? 0 : 1;
      std::cout << check << " #" << i << ": discrepancy " << value << " (tol " << tol << ") "
                << (ok ? "ok" : "MISMATCH") << '\n';
      if (csv) {
        *csv << check << ',' << i << ',' << aps::csv::format(value) << ','
             << aps::csv::format(tol) << '\n';
      }
    };

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto instance = [&](Eigen::Index d, Eigen::Index rows) {
      Eigen::MatrixXd a = gaussian(rng, rows, d);
      a.row(0).setConstant(0.5);
      Eigen::VectorXd rho(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        rho[i] = unit(rng);
      }
      return std::make_pair(a, Eigen::VectorXd(a * rho));
    };

    for (int i = 0; i < instances; ++i) {
      if (kind == "all" || kind == "nnls") {
        const Eigen::MatrixXd b = gaussian(rng, 5, 7);
        const Eigen::VectorXd t = gaussian(rng, 5, 1);
        const auto got = aps::nnls(b, t);
        const auto ref = aps::oracles::nnls_by_enumeration(b, t);
        report("nnls", i, std::abs((b * got.solution - t).squaredNorm() - ref.objective), 1e-8);
      }
      if (kind == "all" || kind == "prox") {
        const auto [a, r] = instance(6, 3);
        const auto metric = random_metric(rng, 6);
        const Eigen::VectorXd x = gaussian(rng, 6, 1);
        const auto got = aps::prox_g(metric, a, r, 5.0, x);
        const auto ref = aps::oracles::prox_by_projected_gradient(
          a, r, metric.matrix(), 5.0, x, 1000000, 1e-15);
        report("prox", i, metric.distance(got.values(), ref.x), 1e-6);
      }
      if (kind == "all" || kind == "haugazeau") {
        const auto [a, r] = instance(6, 3);
        const auto metric = random_metric(rng, 6);
        const Eigen::VectorXd hat = gaussian(rng, 6, 1).cwiseAbs();
        aps::HaugazeauConfig cfg;
        cfg.max_iterations = 100000;
        const auto got = aps::haugazeau_estimate(metric, a, r, hat, cfg);
        const auto ref =
          aps::oracles::hierarchical_projection_by_enumeration(metric.matrix(), a, r, hat);
        report("haugazeau", i, metric.distance(got.estimate.values(), ref.x), 1e-4);
      }
    }
    if (failures > 0) {
      aps::fail(aps::ErrorKind::InvalidArgument,
        std::to_string(failures) + " oracle comparison(s) out of tolerance");
    }
  }
};

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Angular power spectrum estimation from channel covariance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aps 0.1.0");

  DatasetCommand dataset;
  OperatorCommand op;
  SimulateCommand simulate;
  EstimateCommand estimate;
  ExperimentCommand experiment;
  OracleCommand oracle;
  dataset.attach(app);
  op.attach(app);
  simulate.attach(app);
  estimate.attach(app);
  experiment.attach(app);
  oracle.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e);
  } catch (const aps::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
