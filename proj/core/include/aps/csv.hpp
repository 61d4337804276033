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

#ifndef APS__CSV_HPP_
#define APS__CSV_HPP_

#include <Eigen/Dense>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace aps::csv
{

/// Shortest round-trip decimal representation.
std::string format(double value);

void write_row(std::ostream & out, const Eigen::VectorXd & values);

/// Numeric CSV: lines starting with '#' are skipped, as is a first line containing letters.
std::vector<std::vector<double>> read_numbers(const std::filesystem::path & path);

/// All numbers in the file flattened in reading order (one-per-line or comma separated).
Eigen::VectorXd read_vector(const std::filesystem::path & path);
void write_vector(const std::filesystem::path & path, const Eigen::VectorXd & values);

Eigen::MatrixXd read_matrix(const std::filesystem::path & path);
void write_matrix(const std::filesystem::path & path, const Eigen::MatrixXd & values);

}  // namespace aps::csv

#endif  // APS__CSV_HPP_
