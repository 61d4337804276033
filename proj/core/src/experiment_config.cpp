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

#include <cmath>
#include <set>

#include "aps/config_tree.hpp"
#include "aps/error.hpp"
#include "aps/experiment.hpp"

namespace aps
{

std::string to_string(AlgorithmKind kind)
{
  switch (kind) {
    case AlgorithmKind::Pocs: return "pocs";
    case AlgorithmKind::Haugazeau: return "haugazeau";
    case AlgorithmKind::Regularized: return "regularized";
  }
  return "?";
}

double AlphaSpec::resolve(double covariance_norm) const
{
  const double alpha = rule == AlphaRule::SpectralFraction ? covariance_norm / value : value;
  require(alpha > 0.0 && std::isfinite(alpha), ErrorKind::InvalidArgument,
    "resolved alpha must be positive (is the dataset covariance zero?)");
  return alpha;
}

int ExperimentConfig::curve_length() const
{
  int longest = 0;
  for (const auto & a : algorithms) {
    if (a.kind != AlgorithmKind::Regularized) {
      longest = std::max(longest, a.iterations);
    }
  }
  return longest;
}

void ExperimentConfig::validate() const
{
  require(schema_version == 1, ErrorKind::Parse, "unsupported schema_version");
  array.validate();
  const AngularGrid grid = build_grid(grid_lower_rad, grid_upper_rad, grid_points);
  aps_model_train.validate(grid);
  aps_model_test.validate(grid);
  channel_sim.validate();
  require(dataset_size >= 2, ErrorKind::InvalidArgument, "dataset_size must be at least 2");
  require(num_trials >= 1, ErrorKind::InvalidArgument, "num_trials must be at least 1");
  require(alpha.value > 0.0, ErrorKind::InvalidArgument, "alpha value must be positive");
  require(!algorithms.empty(), ErrorKind::InvalidArgument, "no algorithms configured");
  std::set<std::string> labels;
  for (const auto & a : algorithms) {
    require(!a.label.empty(), ErrorKind::InvalidArgument, "algorithm label is empty");
    require(labels.insert(a.label).second, ErrorKind::InvalidArgument,
      "duplicate algorithm label");
    require(a.iterations >= 0, ErrorKind::InvalidArgument, "iterations must be >= 0");
    require(a.gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be > 0");
    require(a.mu > 0.0, ErrorKind::InvalidArgument, "mu must be > 0");
    require(a.relaxation > 0.0 && a.relaxation <= 2.0, ErrorKind::InvalidArgument,
      "relaxation must lie in (0, 2]");
  }
}

std::vector<AlgorithmSpec> default_algorithms()
{
  std::vector<AlgorithmSpec> out(4);
  out[0].kind = AlgorithmKind::Pocs;
  out[0].label = "POCS";
  out[0].tolerance = 1e-8;
  out[1].kind = AlgorithmKind::Haugazeau;
  out[1].label = "Haugazeau";
  out[2].kind = AlgorithmKind::Regularized;
  out[2].label = "NNLS-1";
  out[2].mu = 5e4;
  out[3].kind = AlgorithmKind::Regularized;
  out[3].label = "NNLS-2";
  out[3].mu = 1.0;
  return out;
}

namespace
{

using config::Node;

class Reader
{
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void error(const Node & at, const std::string & field, const std::string & msg) const
  {
    fail(ErrorKind::Parse, source_ + ":" + std::to_string(at.line) + ": field '" + field +
      "': " + msg);
  }

  const Node * get(const Node & table, const std::string & key, Node::Type type,
    const std::string & path) const
  {
    const Node * n = table.find(key);
    if (n == nullptr) {
      return nullptr;
    }
    const bool ok = n->type == type ||
      (type == Node::Type::Float && n->type == Node::Type::Integer);
    if (!ok) {
      error(*n, path, std::string("expected ") + config::type_name(type) + ", found " +
        config::type_name(n->type));
    }
    return n;
  }

  void number(const Node & t, const std::string & key, const std::string & path, double & out)
  {
    if (const Node * n = get(t, key, Node::Type::Float, path)) {
      out = n->as_double();
    }
  }

  template <typename Int>
  void integer(const Node & t, const std::string & key, const std::string & path, Int & out)
  {
    if (const Node * n = get(t, key, Node::Type::Integer, path)) {
      if (n->integer < 0 && std::is_unsigned_v<Int>) {
        error(*n, path, "must be nonnegative");
      }
      out = static_cast<Int>(n->integer);
    }
  }

  void boolean(const Node & t, const std::string & key, const std::string & path, bool & out)
  {
    if (const Node * n = get(t, key, Node::Type::Boolean, path)) {
      out = n->boolean;
    }
  }

  void string(const Node & t, const std::string & key, const std::string & path,
    std::string & out)
  {
    if (const Node * n = get(t, key, Node::Type::String, path)) {
      out = n->text;
    }
  }

  void check_keys(const Node & t, const std::string & prefix,
    std::initializer_list<const char *> known) const
  {
    for (const auto & [name, value] : t.fields) {
      bool found = false;
      for (const char * k : known) {
        found = found || name == k;
      }
      if (!found) {
        error(value, prefix + name, "unknown field");
      }
    }
  }

  void aps_model(const Node & root, const std::string & key, ApsModelConfig & model)
  {
    const Node * t = get(root, key, Node::Type::Table, key);
    if (t == nullptr) {
      return;
    }
    const std::string p = key + ".";
    check_keys(*t, p,
      {"num_paths", "angle_low_rad", "angle_high_rad", "spread_rad", "normalize_weights"});
    if (const Node * n = get(*t, "num_paths", Node::Type::Array, p + "num_paths")) {
      model.num_paths_choices.clear();
      for (const auto & item : n->items) {
        if (item.type != Node::Type::Integer) {
          error(item, p + "num_paths", "entries must be integers");
        }
        model.num_paths_choices.push_back(static_cast<int>(item.integer));
      }
    }
    number(*t, "angle_low_rad", p + "angle_low_rad", model.angle_low_rad);
    number(*t, "angle_high_rad", p + "angle_high_rad", model.angle_high_rad);
    number(*t, "spread_rad", p + "spread_rad", model.spread_rad);
    boolean(*t, "normalize_weights", p + "normalize_weights", model.normalize_weights);
  }

  ExperimentConfig read(const Node & root)
  {
    ExperimentConfig c;
    check_keys(root, "",
      {"schema_version", "name", "dataset_size", "num_trials", "master_seed", "output_dir",
        "normalize_metric", "plot", "array", "grid", "aps_train", "aps_test", "channel", "alpha",
        "algorithms"});
    integer(root, "schema_version", "schema_version", c.schema_version);
    if (c.schema_version != 1) {
      error(*root.find("schema_version"), "schema_version", "only version 1 is supported");
    }
    string(root, "name", "name", c.name);
    integer(root, "dataset_size", "dataset_size", c.dataset_size);
    integer(root, "num_trials", "num_trials", c.num_trials);
    integer(root, "master_seed", "master_seed", c.master_seed);
    std::string out_dir = c.name;
    string(root, "output_dir", "output_dir", out_dir);
    c.output_dir = out_dir;
    boolean(root, "normalize_metric", "normalize_metric", c.normalize_metric);
    boolean(root, "plot", "plot", c.write_plot);

    if (const Node * t = get(root, "array", Node::Type::Table, "array")) {
      check_keys(*t, "array.",
        {"num_antennas", "carrier_frequency_hz", "wave_speed_m_s", "antenna_spacing_m"});
      integer(*t, "num_antennas", "array.num_antennas", c.array.num_antennas);
      number(*t, "carrier_frequency_hz", "array.carrier_frequency_hz",
        c.array.carrier_frequency_hz);
      number(*t, "wave_speed_m_s", "array.wave_speed_m_s", c.array.wave_speed_m_s);
      if (t->find("antenna_spacing_m") != nullptr) {
        double spacing = 0.0;
        number(*t, "antenna_spacing_m", "array.antenna_spacing_m", spacing);
        c.array.antenna_spacing_m = spacing;
      }
    }
    if (const Node * t = get(root, "grid", Node::Type::Table, "grid")) {
      check_keys(*t, "grid.", {"lower_rad", "upper_rad", "num_points"});
      number(*t, "lower_rad", "grid.lower_rad", c.grid_lower_rad);
      number(*t, "upper_rad", "grid.upper_rad", c.grid_upper_rad);
      integer(*t, "num_points", "grid.num_points", c.grid_points);
    }
    aps_model(root, "aps_train", c.aps_model_train);
    c.aps_model_test = c.aps_model_train;
    aps_model(root, "aps_test", c.aps_model_test);

    if (const Node * t = get(root, "channel", Node::Type::Table, "channel")) {
      check_keys(*t, "channel.", {"num_snapshots", "noise_variance", "symbol_model"});
      integer(*t, "num_snapshots", "channel.num_snapshots", c.channel_sim.num_snapshots);
      number(*t, "noise_variance", "channel.noise_variance", c.channel_sim.noise_variance);
      if (const Node * n = get(*t, "symbol_model", Node::Type::String, "channel.symbol_model")) {
        try {
          c.channel_sim.symbol_model = parse_symbol_model(n->text);
        } catch (const Error & e) {
          error(*n, "channel.symbol_model", e.what());
        }
      }
    }
    if (const Node * t = get(root, "alpha", Node::Type::Table, "alpha")) {
      check_keys(*t, "alpha.", {"rule", "divisor", "value"});
      std::string rule = "spectral_fraction";
      string(*t, "rule", "alpha.rule", rule);
      if (rule == "spectral_fraction") {
        c.alpha.rule = AlphaRule::SpectralFraction;
        number(*t, "divisor", "alpha.divisor", c.alpha.value);
      } else if (rule == "absolute") {
        c.alpha.rule = AlphaRule::Absolute;
        if (t->find("value") == nullptr) {
          error(*t, "alpha.value", "required for the absolute rule");
        }
        number(*t, "value", "alpha.value", c.alpha.value);
      } else {
        error(*t->find("rule"), "alpha.rule", "expected 'spectral_fraction' or 'absolute'");
      }
    }

    if (const Node * list = root.find("algorithms")) {
      if (list->type != Node::Type::Array) {
        error(*list, "algorithms", "expected [[algorithms]] tables");
      }
      c.algorithms.clear();
      for (std::size_t i = 0; i < list->items.size(); ++i) {
        const Node & t = list->items[i];
        const std::string p = "algorithms[" + std::to_string(i) + "].";
        if (t.type != Node::Type::Table) {
          error(t, p, "expected a table");
        }
        check_keys(t, p,
          {"kind", "label", "iterations", "gamma", "mu", "relaxation", "tolerance"});
        AlgorithmSpec a;
        std::string kind;
        string(t, "kind", p + "kind", kind);
        if (kind == "pocs") {
          a.kind = AlgorithmKind::Pocs;
          a.tolerance = 1e-8;
        } else if (kind == "haugazeau") {
          a.kind = AlgorithmKind::Haugazeau;
        } else if (kind == "regularized") {
          a.kind = AlgorithmKind::Regularized;
        } else {
          error(t, p + "kind", "expected 'pocs', 'haugazeau' or 'regularized'");
        }
        a.label = kind;
        string(t, "label", p + "label", a.label);
        integer(t, "iterations", p + "iterations", a.iterations);
        number(t, "gamma", p + "gamma", a.gamma);
        number(t, "mu", p + "mu", a.mu);
        number(t, "relaxation", p + "relaxation", a.relaxation);
        number(t, "tolerance", p + "tolerance", a.tolerance);
        c.algorithms.push_back(std::move(a));
      }
    } else {
      c.algorithms = default_algorithms();
    }
    return c;
  }

private:
  std::string source_;
};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string & text, const std::string & source)
{
  ExperimentConfig c = Reader(source).read(config::parse(text, source));
  try {
    c.validate();
  } catch (const Error & e) {
    fail(ErrorKind::Parse, source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path & path)
{
  ExperimentConfig c = Reader(path.string()).read(config::parse_file(path));
  try {
    c.validate();
  } catch (const Error & e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace aps
