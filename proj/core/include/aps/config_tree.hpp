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

#ifndef APS__CONFIG_TREE_HPP_
#define APS__CONFIG_TREE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace aps::config
{

/// Parsed value of the TOML subset used by experiment files: tables, arrays of tables, strings,
/// integers, floats, booleans and (possibly multi-line) arrays of scalars.
struct Node
{
  enum class Type
  {
    Table,
    Array,
    String,
    Integer,
    Float,
    Boolean,
  };

  Type type = Type::Table;
  int line = 0;
  std::string text;
  std::int64_t integer = 0;
  double number = 0.0;
  bool boolean = false;
  std::vector<Node> items;
  std::vector<std::pair<std::string, Node>> fields;

  const Node * find(const std::string & key) const;
  bool is_number() const { return type == Type::Integer || type == Type::Float; }
  double as_double() const { return type == Type::Integer ? static_cast<double>(integer) : number; }
};

const char * type_name(Node::Type type);

/// Throws Error(Parse) with "<source>:<line>: ..." on malformed input.
Node parse(const std::string & text, const std::string & source = "<string>");
Node parse_file(const std::filesystem::path & path);

}  // namespace aps::config

#endif  // APS__CONFIG_TREE_HPP_
