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

#ifndef APS__EXPERIMENT_HPP_
#define APS__EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "aps/forward_model.hpp"
#include "aps/statistics.hpp"
#include "aps/synthesis.hpp"

namespace aps
{

enum class AlgorithmKind
{
  Pocs,
  Haugazeau,
  Regularized,
};

std::string to_string(AlgorithmKind kind);

struct AlgorithmSpec
{
  AlgorithmKind kind = AlgorithmKind::Haugazeau;
  std::string label;
  int iterations = 500;
  double gamma = 5.0;
  double mu = 5e4;
  double relaxation = 1.0;
  /// POCS convergence tolerance, or the Haugazeau fixed-point tolerance (<= 0: automatic).
  double tolerance = 0.0;
};

enum class AlphaRule
{
  /// alpha = ||C||_2 / value
  SpectralFraction,
  /// alpha = value
  Absolute,
};

struct AlphaSpec
{
  AlphaRule rule = AlphaRule::SpectralFraction;
  double value = 100.0;

  double resolve(double covariance_norm) const;
};

struct ExperimentConfig
{
  int schema_version = 1;
  std::string name = "experiment";
  ArrayConfig array;
  double grid_lower_rad = -std::numbers::pi / 2.0;
  double grid_upper_rad = std::numbers::pi / 2.0;
  Eigen::Index grid_points = 180;
  ApsModelConfig aps_model_train;
  ApsModelConfig aps_model_test;
  ChannelSimConfig channel_sim;
  int dataset_size = 1000;
  AlphaSpec alpha;
  bool normalize_metric = true;
  std::vector<AlgorithmSpec> algorithms;
  int num_trials = 200;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "results";
  bool write_plot = true;

  /// Longest iteration budget among the iterative algorithms; curves have this many points
  /// plus one.
  int curve_length() const;
  void validate() const;
};

/// The default algorithm set: POCS baseline, Haugazeau (gamma = 5) and two regularized solves.
std::vector<AlgorithmSpec> default_algorithms();

ExperimentConfig parse_experiment_config(const std::string & text,
  const std::string & source = "<string>");
ExperimentConfig load_experiment_config(const std::filesystem::path & path);

struct AlgorithmCurve
{
  std::string label;
  AlgorithmKind kind = AlgorithmKind::Pocs;
  std::vector<double> mean_nmse;
  std::vector<double> stderr_nmse;
  std::vector<double> mean_feasibility_residual;
  /// Final NMSE of each successful trial, in trial order.
  std::vector<double> trial_final_nmse;
  int converged_trials = 0;
  double mean_wall_ms = 0.0;

  double final_mean() const { return mean_nmse.back(); }
  double final_stderr() const { return stderr_nmse.back(); }
};

struct TrialFailure
{
  int trial;
  std::uint64_t seed;
  std::string message;
};

struct ResultTable
{
  std::string name;
  std::vector<AlgorithmCurve> curves;
  std::vector<int> completed_trials;
  std::vector<TrialFailure> failures;
  double covariance_norm = 0.0;
  double alpha = 0.0;

  const AlgorithmCurve & curve(const std::string & label) const;
};

/// Training set, statistics and metric shared by every trial of an experiment.
struct ExperimentContext
{
  ForwardOperator op;
  DatasetStatistics stats;
  MahalanobisMetric metric;
  double covariance_norm;
  double alpha;
};

ExperimentContext prepare_experiment(const ExperimentConfig & config);

struct RunOptions
{
  /// <= 0: APS_THREADS if set, otherwise hardware concurrency.
  int threads = 0;
  bool write_outputs = true;
  bool progress = false;
};

int resolve_thread_count(int requested);

/// Stream identifiers for make_rng.
inline constexpr std::uint64_t kDatasetStream = 1;
inline constexpr std::uint64_t kTrialStream = 2;

/// Runs every trial, aggregates NMSE curves in trial order and, if requested, writes
/// results.csv, curves.csv, summary.csv, trial_final_nmse.csv, timing.csv, failures.csv
/// and nmse.svg to the output directory.
ResultTable run_experiment(const ExperimentConfig & config, const RunOptions & options = {});

/// `iteration,<label>...`: mean NMSE per iteration, one column per algorithm.
void write_results_csv(const ResultTable & table, std::ostream & out);
/// `algorithm,iteration,mean_nmse,stderr_nmse,mean_feasibility_residual`.
void write_curves_csv(const ResultTable & table, std::ostream & out);
void write_summary_csv(const ResultTable & table, std::ostream & out);
void write_outputs(const ResultTable & table, const std::filesystem::path & dir, bool plot);

/// Log-scale line plot of the mean NMSE curves.
void write_nmse_svg(const ResultTable & table, const std::filesystem::path & path);

}  // namespace aps

#endif  // APS__EXPERIMENT_HPP_
