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

#include <numbers>
#include <string>

#include "aps/config_tree.hpp"
#include "aps/error.hpp"
#include "aps/experiment.hpp"

namespace
{

using aps::config::Node;

std::string parse_error(const std::string & text)
{
  try {
    aps::parse_experiment_config(text, "test.toml");
  } catch (const aps::Error & e) {
    CHECK(e.kind() == aps::ErrorKind::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

bool contains(const std::string & haystack, const std::string & needle)
{
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("config tree scalars, tables and arrays")
{
  const Node root = aps::config::parse(R"(
# comment
title = "demo"   # trailing comment
count = 1_000
ratio = -2.5e-3
flag = true
list = [1, 2,
  3]

[outer.inner]
"quoted key" = 'literal'

[[items]]
x = 1
[[items]]
x = 2
)");
  REQUIRE(root.find("title") != nullptr);
  CHECK(root.find("title")->text == "demo");
  CHECK(root.find("count")->integer == 1000);
  CHECK(root.find("ratio")->number == doctest::Approx(-2.5e-3));
  CHECK(root.find("flag")->boolean);
  const Node * list = root.find("list");
  REQUIRE(list->items.size() == 3);
  CHECK(list->items[2].integer == 3);
  const Node * inner = root.find("outer")->find("inner");
  REQUIRE(inner != nullptr);
  CHECK(inner->find("quoted key")->text == "literal");
  const Node * items = root.find("items");
  REQUIRE(items->type == Node::Type::Array);
  REQUIRE(items->items.size() == 2);
  CHECK(items->items[1].find("x")->integer == 2);
  CHECK(root.find("count")->line == 4);
}

TEST_CASE("config tree errors carry line numbers")
{
  auto message = [](const std::string & text) {
    try {
      aps::config::parse(text, "f.toml");
    } catch (const aps::Error & e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(contains(message("a = 1\nb = \n"), "f.toml:2:"));
  CHECK(contains(message("a = 1\na = 2\n"), "f.toml:2:"));
  CHECK(contains(message("[t\n"), "f.toml:1:"));
  CHECK(contains(message("x = \"open\n"), "f.toml:1:"));
  CHECK(contains(message("x = [1, 2\n"), "f.toml:1:"));
}

TEST_CASE("experiment config defaults")
{
  const auto c = aps::parse_experiment_config("schema_version = 1\nname = \"d\"\n");
  CHECK(c.array.num_antennas == 16);
  CHECK(c.grid_points == 180);
  CHECK(c.dataset_size == 1000);
  CHECK(c.num_trials == 200);
  CHECK(c.channel_sim.num_snapshots == 500);
  CHECK(c.channel_sim.noise_variance == 0.1);
  CHECK(c.alpha.rule == aps::AlphaRule::SpectralFraction);
  CHECK(c.alpha.value == 100.0);
  CHECK(c.alpha.resolve(50.0) == doctest::Approx(0.5));
  CHECK(c.normalize_metric);
  REQUIRE(c.algorithms.size() == 4);
  CHECK(c.algorithms[1].kind == aps::AlgorithmKind::Haugazeau);
  CHECK(c.algorithms[1].gamma == 5.0);
  CHECK(c.algorithms[2].mu == 5e4);
  CHECK(c.algorithms[3].mu == 1.0);
  CHECK(c.curve_length() == 500);
  CHECK(c.output_dir == "d");
}

TEST_CASE("shipped experiment configs")
{
  const std::string dir = APS_CONFIG_DIR;
  const auto fig1 = aps::load_experiment_config(dir + "/fig1.toml");
  const auto fig2 = aps::load_experiment_config(dir + "/fig2.toml");
  const auto fig3 = aps::load_experiment_config(dir + "/fig3.toml");
  CHECK(fig1.name == "fig1");
  CHECK(fig1.aps_model_test.angle_low_rad == 0.0);
  CHECK(fig1.aps_model_test.angle_high_rad == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(fig2.aps_model_train.angle_low_rad == 0.0);
  CHECK(fig2.aps_model_test.angle_low_rad == doctest::Approx(-std::numbers::pi / 2.0));
  CHECK(fig2.aps_model_test.angle_high_rad == 0.0);
  CHECK(fig2.alpha.value == 100.0);
  CHECK(fig3.alpha.value == 1.0);
  CHECK(fig2.master_seed == fig3.master_seed);
  for (const auto * c : {&fig1, &fig2, &fig3}) {
    CHECK(c->array.num_antennas == 16);
    CHECK(c->array.carrier_frequency_hz == 2.11e9);
    CHECK(c->grid_points == 180);
    CHECK(c->dataset_size == 1000);
    CHECK(c->num_trials == 200);
    CHECK(c->channel_sim.num_snapshots == 500);
    CHECK(c->channel_sim.noise_variance == 0.1);
    REQUIRE(c->algorithms.size() == 4);
    CHECK(c->algorithms[1].gamma == 5.0);
    CHECK(c->algorithms[2].mu == 5e4);
    CHECK(c->algorithms[3].mu == 1.0);
  }
  CHECK_NOTHROW(aps::load_experiment_config(dir + "/smoke.toml"));
}

TEST_CASE("experiment config errors cite line and field")
{
  const std::string unknown = parse_error("schema_version = 1\n[array]\nantennas = 4\n");
  CHECK(contains(unknown, "test.toml:3:"));
  CHECK(contains(unknown, "array.antennas"));

  const std::string type = parse_error("schema_version = 1\nnum_trials = \"many\"\n");
  CHECK(contains(type, "test.toml:2:"));
  CHECK(contains(type, "num_trials"));

  const std::string kind = parse_error("[[algorithms]]\nkind = \"gd\"\n");
  CHECK(contains(kind, "algorithms[0].kind"));

  const std::string rule = parse_error("[alpha]\nrule = \"median\"\n");
  CHECK(contains(rule, "alpha.rule"));

  const std::string version = parse_error("schema_version = 2\n");
  CHECK(contains(version, "schema_version"));

  const std::string dup =
    parse_error("[[algorithms]]\nkind = \"pocs\"\n[[algorithms]]\nkind = \"pocs\"\n");
  CHECK(contains(dup, "duplicate"));

  CHECK(contains(parse_error("num_trials = 0\n"), "num_trials"));
  CHECK(contains(parse_error("[channel]\nsymbol_model = \"qam\"\n"), "channel.symbol_model"));

  try {
    aps::load_experiment_config("/nonexistent/config.toml");
    FAIL("expected an error");
  } catch (const aps::Error & e) {
    CHECK(e.kind() == aps::ErrorKind::Io);
  }
}

TEST_CASE("absolute alpha rule")
{
  const auto c = aps::parse_experiment_config("[alpha]\nrule = \"absolute\"\nvalue = 0.25\n");
  CHECK(c.alpha.rule == aps::AlphaRule::Absolute);
  CHECK(c.alpha.resolve(123.0) == 0.25);
  CHECK(contains(parse_error("[alpha]\nrule = \"absolute\"\n"), "alpha.value"));
}
