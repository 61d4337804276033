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

#include "aps/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "aps/error.hpp"

namespace aps::csv
{

std::string format(double value)
{
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_row(std::ostream & out, const Eigen::VectorXd & values)
{
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i) {
      out << ',';
    }
    out << format(values[i]);
  }
  out << '\n';
}

std::vector<std::vector<double>> read_numbers(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::Io, "cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const bool has_letters = std::any_of(line.begin(), line.end(), [](unsigned char c) {
      return std::isalpha(c) && c != 'e' && c != 'E';
    });
    if (has_letters && rows.empty()) {
      continue;  // header
    }
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      if (first == std::string::npos) {
        continue;
      }
      const std::string trimmed = field.substr(first, last - first + 1);
      double value = 0.0;
      const auto [ptr, ec] =
        std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
      if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
        fail(ErrorKind::Parse,
          path.string() + ":" + std::to_string(line_number) + ": bad number '" + trimmed + "'");
      }
      row.push_back(value);
    }
    if (!row.empty()) {
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Eigen::VectorXd read_vector(const std::filesystem::path & path)
{
  std::vector<double> flat;
  for (const auto & row : read_numbers(path)) {
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Eigen::Map<Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

void write_vector(const std::filesystem::path & path, const Eigen::VectorXd & values)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out << format(values[i]) << '\n';
  }
}

Eigen::MatrixXd read_matrix(const std::filesystem::path & path)
{
  const auto rows = read_numbers(path);
  if (rows.empty()) {
    return {};
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      fail(ErrorKind::Parse, path.string() + ": ragged matrix at row " + std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

void write_matrix(const std::filesystem::path & path, const Eigen::MatrixXd & values)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    write_row(out, values.row(i).transpose());
  }
}

}  // namespace aps::csv
