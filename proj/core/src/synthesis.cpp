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

#include "aps/synthesis.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "aps/csv.hpp"
#include "aps/error.hpp"

namespace aps
{

Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index)};
  return Rng(seq);
}

void ApsModelConfig::validate(const AngularGrid & grid) const
{
  require(!num_paths_choices.empty(), ErrorKind::InvalidArgument, "no path counts to draw from");
  for (int q : num_paths_choices) {
    require(q >= 1, ErrorKind::InvalidArgument, "path counts must be at least one");
  }
  require(angle_low_rad <= angle_high_rad, ErrorKind::InvalidBounds,
    "path angle interval is reversed");
  require(angle_low_rad >= grid.lower_rad() && angle_high_rad <= grid.upper_rad(),
    ErrorKind::InvalidBounds, "path angle interval must lie inside the grid domain");
  require(spread_rad > 0.0, ErrorKind::InvalidArgument, "angular spread must be positive");
}

SymbolModel parse_symbol_model(const std::string & name)
{
  if (name == "unit-modulus" || name == "unit-modulus-random-phase") {
    return SymbolModel::UnitModulusRandomPhase;
  }
  if (name == "complex-gaussian") {
    return SymbolModel::ComplexGaussian;
  }
  fail(ErrorKind::Parse, "unknown symbol model '" + name + "'");
}

std::string to_string(SymbolModel model)
{
  return model == SymbolModel::ComplexGaussian ? "complex-gaussian" : "unit-modulus-random-phase";
}

void ChannelSimConfig::validate() const
{
  require(num_snapshots >= 1, ErrorKind::InvalidArgument, "need at least one snapshot");
  require(noise_variance >= 0.0, ErrorKind::InvalidArgument, "noise variance must be >= 0");
}

ApsVector evaluate_mixture(
  std::span<const PathComponent> paths, double spread_rad, const AngularGrid & grid)
{
  require(spread_rad > 0.0, ErrorKind::InvalidArgument, "angular spread must be positive");
  const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * spread_rad * spread_rad);
  const double denom = 2.0 * spread_rad * spread_rad;
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(grid.num_points());
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    const double theta = grid.angles_rad()[i];
    for (const auto & p : paths) {
      const double diff = theta - p.center_rad;
      rho[i] += p.weight * scale * std::exp(-diff * diff / denom);
    }
  }
  return ApsVector(std::move(rho));
}

std::vector<PathComponent> sample_paths(const ApsModelConfig & config, Rng & rng)
{
  std::uniform_int_distribution<std::size_t> pick(0, config.num_paths_choices.size() - 1);
  const int q = config.num_paths_choices[pick(rng)];
  std::uniform_real_distribution<double> center(config.angle_low_rad, config.angle_high_rad);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<PathComponent> paths(static_cast<std::size_t>(q));
  double total = 0.0;
  for (auto & p : paths) {
    p.center_rad = center(rng);
    p.weight = unit(rng);
    total += p.weight;
  }
  if (config.normalize_weights) {
    for (auto & p : paths) {
      p.weight = total > 0.0 ? p.weight / total : 1.0 / q;
    }
  }
  return paths;
}

ApsVector sample_aps(const ApsModelConfig & config, const AngularGrid & grid, Rng & rng)
{
  config.validate(grid);
  const auto paths = sample_paths(config, rng);
  return evaluate_mixture(paths, config.spread_rad, grid);
}

HermitianToeplitzCovariance true_covariance(const ForwardOperator & op, const ApsVector & aps)
{
  return devectorize(apply(op, aps));
}

HermitianToeplitzCovariance simulate_sample_covariance(
  const HermitianToeplitzCovariance & true_cov, const ChannelSimConfig & config, Rng & rng)
{
  config.validate();
  const Eigen::MatrixXcd r = true_cov.to_matrix();
  const Eigen::Index n = r.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::FactorizationFailure, "eigendecomposition of the covariance failed");
  }
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd color = eig.eigenvectors() * root.asDiagonal();

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double half = std::sqrt(0.5);
  const double noise_scale = std::sqrt(config.noise_variance) * half;
  auto complex_normal = [&](double scale) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    return std::complex<double>(scale * re, scale * im);
  };

  const int k = config.num_snapshots;
  Eigen::MatrixXcd snapshots(n, k);
  Eigen::VectorXcd w(n);
  for (int s = 0; s < k; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = complex_normal(half);
    }
    std::complex<double> symbol;
    if (config.symbol_model == SymbolModel::UnitModulusRandomPhase) {
      symbol = std::polar(1.0, phase(rng));
    } else {
      symbol = complex_normal(half);
    }
    snapshots.col(s) = (color * w) * symbol;
    for (Eigen::Index i = 0; i < n; ++i) {
      snapshots(i, s) += complex_normal(noise_scale);
    }
  }

  Eigen::MatrixXcd estimate = (snapshots * snapshots.adjoint()) / static_cast<double>(k);
  estimate.diagonal().array() -= config.noise_variance;
  return toeplitz_project(estimate);
}

void write_dataset(const std::filesystem::path & path, std::span<const ApsVector> samples,
  const DatasetMetadata & metadata)
{
  {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
      fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    for (const auto & s : samples) {
      csv::write_row(out, s.values());
    }
  }
  nlohmann::ordered_json meta;
  meta["format"] = "aps-dataset";
  meta["version"] = 1;
  meta["count"] = samples.size();
  meta["grid"] = {{"lower_rad", metadata.lower_rad}, {"upper_rad", metadata.upper_rad},
    {"num_points", metadata.num_points}};
  meta["model"] = {{"num_paths_choices", metadata.model.num_paths_choices},
    {"angle_low_rad", metadata.model.angle_low_rad},
    {"angle_high_rad", metadata.model.angle_high_rad},
    {"spread_rad", metadata.model.spread_rad},
    {"normalize_weights", metadata.model.normalize_weights}};
  meta["seed"] = metadata.seed;
  std::ofstream out(path.string() + ".meta.json", std::ios::trunc);
  out << meta.dump(2) << '\n';
}

std::vector<ApsVector> read_dataset(const std::filesystem::path & path)
{
  std::vector<ApsVector> out;
  for (auto & row : csv::read_numbers(path)) {
    out.emplace_back(
      Eigen::Map<Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size())));
  }
  return out;
}

}  // namespace aps
