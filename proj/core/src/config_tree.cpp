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

#include "aps/config_tree.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "aps/error.hpp"

namespace aps::config
{

const Node * Node::find(const std::string & key) const
{
  for (const auto & [name, value] : fields) {
    if (name == key) {
      return &value;
    }
  }
  return nullptr;
}

const char * type_name(Node::Type type)
{
  switch (type) {
    case Node::Type::Table: return "table";
    case Node::Type::Array: return "array";
    case Node::Type::String: return "string";
    case Node::Type::Integer: return "integer";
    case Node::Type::Float: return "float";
    case Node::Type::Boolean: return "boolean";
  }
  return "?";
}

namespace
{

class Parser
{
public:
  Parser(const std::string & text, std::string source) : source_(std::move(source))
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      lines_.push_back(line);
    }
  }

  Node run()
  {
    Node root;
    root.line = 1;
    Node * current = &root;
    for (line_no_ = 0; line_no_ < lines_.size(); ++line_no_) {
      std::string line = strip(lines_[line_no_]);
      if (line.empty()) {
        continue;
      }
      if (line.rfind("[[", 0) == 0) {
        if (line.size() < 4 || line.substr(line.size() - 2) != "]]") {
          error("unterminated array-of-tables header");
        }
        current = &append_table(root, split_path(line.substr(2, line.size() - 4)));
      } else if (line.front() == '[') {
        if (line.back() != ']') {
          error("unterminated table header");
        }
        current = &open_table(root, split_path(line.substr(1, line.size() - 2)));
      } else {
        parse_assignment(*current, line);
      }
    }
    return root;
  }

private:
  [[noreturn]] void error(const std::string & message) const
  {
    fail(ErrorKind::Parse, source_ + ":" + std::to_string(line_no_ + 1) + ": " + message);
  }

  int line() const { return static_cast<int>(line_no_ + 1); }

  // Tracks basic ("...", with escapes) and literal ('...') strings.
  static bool toggles_quote(const std::string & s, std::size_t i, char & quote)
  {
    const char c = s[i];
    if (quote == 0 && (c == '"' || c == '\'')) {
      quote = c;
      return true;
    }
    if (c == quote && (quote == '\'' || i == 0 || s[i - 1] != '\\')) {
      quote = 0;
      return true;
    }
    return false;
  }

  // Removes a trailing comment (outside strings) and surrounding whitespace.
  static std::string strip(const std::string & raw)
  {
    char quote = 0;
    std::size_t end = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (toggles_quote(raw, i, quote)) {
        continue;
      }
      if (raw[i] == '#' && quote == 0) {
        end = i;
        break;
      }
    }
    const std::string s = raw.substr(0, end);
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
      return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
  }

  std::vector<std::string> split_path(const std::string & header) const
  {
    std::vector<std::string> parts;
    std::stringstream ss(header);
    std::string part;
    while (std::getline(ss, part, '.')) {
      part = strip(part);
      if (!valid_key(part)) {
        error("invalid table name '" + header + "'");
      }
      parts.push_back(part);
    }
    if (parts.empty()) {
      error("empty table name");
    }
    return parts;
  }

  static bool valid_key(const std::string & key)
  {
    if (key.empty()) {
      return false;
    }
    for (unsigned char c : key) {
      if (!std::isalnum(c) && c != '_' && c != '-') {
        return false;
      }
    }
    return true;
  }

  Node & child_table(Node & parent, const std::string & key)
  {
    for (auto & [name, value] : parent.fields) {
      if (name == key) {
        if (value.type == Node::Type::Array && !value.items.empty() &&
            value.items.back().type == Node::Type::Table) {
          return value.items.back();
        }
        if (value.type != Node::Type::Table) {
          error("'" + key + "' is not a table");
        }
        return value;
      }
    }
    Node table;
    table.line = line();
    parent.fields.emplace_back(key, std::move(table));
    return parent.fields.back().second;
  }

  Node & open_table(Node & root, const std::vector<std::string> & path)
  {
    Node * node = &root;
    for (const auto & key : path) {
      node = &child_table(*node, key);
    }
    return *node;
  }

  Node & append_table(Node & root, const std::vector<std::string> & path)
  {
    Node * parent = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      parent = &child_table(*parent, path[i]);
    }
    const std::string & key = path.back();
    Node * array = nullptr;
    for (auto & [name, value] : parent->fields) {
      if (name == key) {
        if (value.type != Node::Type::Array) {
          error("'" + key + "' is already defined and is not an array of tables");
        }
        array = &value;
      }
    }
    if (array == nullptr) {
      Node fresh;
      fresh.type = Node::Type::Array;
      fresh.line = line();
      parent->fields.emplace_back(key, std::move(fresh));
      array = &parent->fields.back().second;
    }
    Node table;
    table.line = line();
    array->items.push_back(std::move(table));
    return array->items.back();
  }

  void parse_assignment(Node & table, const std::string & line_text)
  {
    const auto eq = line_text.find('=');
    if (eq == std::string::npos) {
      error("expected 'key = value'");
    }
    std::string key = strip(line_text.substr(0, eq));
    if (key.size() >= 2 && (key.front() == '"' || key.front() == '\'') &&
      key.back() == key.front()) {
      key = key.substr(1, key.size() - 2);
    } else if (!valid_key(key)) {
      error("invalid key '" + key + "'");
    }
    if (table.find(key) != nullptr) {
      error("duplicate key '" + key + "'");
    }
    std::string value_text = strip(line_text.substr(eq + 1));
    const int start_line = line();
    // Multi-line arrays continue until brackets balance.
    while (!value_text.empty() && value_text.front() == '[' && !balanced(value_text)) {
      if (line_no_ + 1 >= lines_.size()) {
        error("unterminated array for key '" + key + "'");
      }
      ++line_no_;
      value_text += " " + strip(lines_[line_no_]);
    }
    std::size_t pos = 0;
    Node value = parse_value(value_text, pos, start_line);
    skip_space(value_text, pos);
    if (pos != value_text.size()) {
      error("unexpected trailing characters after value of '" + key + "'");
    }
    table.fields.emplace_back(key, std::move(value));
  }

  static bool balanced(const std::string & s)
  {
    int depth = 0;
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (toggles_quote(s, i, quote)) {
        continue;
      }
      if (quote == 0 && s[i] == '[') {
        ++depth;
      } else if (quote == 0 && s[i] == ']') {
        --depth;
      }
    }
    return depth == 0;
  }

  static void skip_space(const std::string & s, std::size_t & pos)
  {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) {
      ++pos;
    }
  }

  Node parse_value(const std::string & s, std::size_t & pos, int at_line)
  {
    skip_space(s, pos);
    if (pos >= s.size()) {
      error("missing value");
    }
    Node node;
    node.line = at_line;
    const char c = s[pos];
    if (c == '"') {
      node.type = Node::Type::String;
      ++pos;
      while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\' && pos + 1 < s.size()) {
          const char e = s[++pos];
          node.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          node.text += s[pos];
        }
        ++pos;
      }
      if (pos >= s.size()) {
        error("unterminated string");
      }
      ++pos;
      return node;
    }
    if (c == '\'') {
      node.type = Node::Type::String;
      const auto close = s.find('\'', pos + 1);
      if (close == std::string::npos) {
        error("unterminated string");
      }
      node.text = s.substr(pos + 1, close - pos - 1);
      pos = close + 1;
      return node;
    }
    if (c == '[') {
      node.type = Node::Type::Array;
      ++pos;
      while (true) {
        skip_space(s, pos);
        if (pos < s.size() && s[pos] == ']') {
          ++pos;
          return node;
        }
        node.items.push_back(parse_value(s, pos, at_line));
        skip_space(s, pos);
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
        } else if (pos < s.size() && s[pos] == ']') {
          ++pos;
          return node;
        } else {
          error("expected ',' or ']' in array");
        }
      }
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != ',' && s[end] != ']' && s[end] != ' ' && s[end] != '\t') {
      ++end;
    }
    std::string token = s.substr(pos, end - pos);
    pos = end;
    if (token == "true" || token == "false") {
      node.type = Node::Type::Boolean;
      node.boolean = token == "true";
      return node;
    }
    std::string digits;
    for (char ch : token) {
      if (ch != '_') {
        digits += ch;
      }
    }
    if (!digits.empty() && digits.front() == '+') {
      digits.erase(0, 1);
    }
    const bool is_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" ||
      digits == "-inf" || digits == "nan";
    const char * first = digits.data();
    const char * last = digits.data() + digits.size();
    if (is_float) {
      node.type = Node::Type::Float;
      const auto [ptr, ec] = std::from_chars(first, last, node.number);
      if (ec != std::errc() || ptr != last) {
        error("invalid number '" + token + "'");
      }
    } else {
      node.type = Node::Type::Integer;
      const auto [ptr, ec] = std::from_chars(first, last, node.integer);
      if (ec != std::errc() || ptr != last || digits.empty()) {
        error("invalid value '" + token + "'");
      }
    }
    return node;
  }

  std::string source_;
  std::vector<std::string> lines_;
  std::size_t line_no_ = 0;
};

}  // namespace

Node parse(const std::string & text, const std::string & source)
{
  return Parser(text, source).run();
}

Node parse_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::Io, "cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

}  // namespace aps::config
