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

#ifndef APS__SYNTHESIS_HPP_
#define APS__SYNTHESIS_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aps/forward_model.hpp"

namespace aps
{

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream, index); streams never share state, so trials can
/// run in any order or in parallel and still reproduce bit for bit.
Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

/// Gaussian-mixture APS model: Q paths, centers uniform on an interval, weights uniform on
/// [0, 1] and normalized, each path a normal density with standard deviation `spread_rad`.
struct ApsModelConfig
{
  std::vector<int> num_paths_choices{1, 2, 3, 4, 5};
  double angle_low_rad = 0.0;
  double angle_high_rad = std::numbers::pi / 2.0;
  double spread_rad = 0.0349;
  bool normalize_weights = true;

  void validate(const AngularGrid & grid) const;
};

enum class SymbolModel
{
  UnitModulusRandomPhase,
  ComplexGaussian,
};

SymbolModel parse_symbol_model(const std::string & name);
std::string to_string(SymbolModel model);

struct ChannelSimConfig
{
  int num_snapshots = 500;
  double noise_variance = 0.1;
  SymbolModel symbol_model = SymbolModel::UnitModulusRandomPhase;

  void validate() const;
};

struct PathComponent
{
  double center_rad;
  double weight;
};

/// sum_k weight_k N(theta; center_k, spread^2) evaluated at each grid angle.
ApsVector evaluate_mixture(
  std::span<const PathComponent> paths, double spread_rad, const AngularGrid & grid);

std::vector<PathComponent> sample_paths(const ApsModelConfig & config, Rng & rng);

ApsVector sample_aps(const ApsModelConfig & config, const AngularGrid & grid, Rng & rng);

HermitianToeplitzCovariance true_covariance(const ForwardOperator & op, const ApsVector & aps);

/// Draws K snapshots y = U S^{1/2} w s + n, forms (1/K) sum y y^H - sigma^2 I and projects the
/// result onto Hermitian Toeplitz matrices. Negative eigenvalues of the estimate are kept.
HermitianToeplitzCovariance simulate_sample_covariance(
  const HermitianToeplitzCovariance & true_cov, const ChannelSimConfig & config, Rng & rng);

struct DatasetMetadata
{
  double lower_rad = 0.0;
  double upper_rad = 0.0;
  Eigen::Index num_points = 0;
  ApsModelConfig model;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

/// One CSV row per APS sample plus `<path>.meta.json` describing the grid, model and seed.
void write_dataset(const std::filesystem::path & path, std::span<const ApsVector> samples,
  const DatasetMetadata & metadata);
std::vector<ApsVector> read_dataset(const std::filesystem::path & path);

}  // namespace aps

#endif  // APS__SYNTHESIS_HPP_
