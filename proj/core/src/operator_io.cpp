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

#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>

#include "aps/error.hpp"
#include "aps/forward_model.hpp"

namespace aps
{
namespace
{

constexpr std::array<char, 8> kMagic = {'A', 'P', 'S', 'F', 'W', 'O', 'P', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream & out, const T & value)
{
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream & in)
{
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in) {
    fail(ErrorKind::Io, "truncated operator file");
  }
  return value;
}

}  // namespace

void save_operator(const ForwardOperator & op, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  }
  out.write(kMagic.data(), kMagic.size());
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::int32_t>(op.num_antennas()));
  write_pod(out, static_cast<std::int64_t>(op.num_columns()));
  write_pod(out, op.array().carrier_frequency_hz);
  write_pod(out, op.array().wave_speed_m_s);
  write_pod(out, op.array().spacing_m());
  write_pod(out, op.grid().lower_rad());
  write_pod(out, op.grid().upper_rad());
  const auto & a = op.matrix();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      write_pod(out, a(i, j));
    }
  }
  if (!out) {
    fail(ErrorKind::Io, "failed writing " + path.string());
  }
}

ForwardOperator load_operator(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::Io, "cannot open " + path.string());
  }
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    fail(ErrorKind::Parse, path.string() + " is not an operator file");
  }
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kVersion) {
    fail(ErrorKind::Parse, "unsupported operator file version " + std::to_string(version));
  }
  ArrayConfig array;
  array.num_antennas = read_pod<std::int32_t>(in);
  const auto num_points = read_pod<std::int64_t>(in);
  array.carrier_frequency_hz = read_pod<double>(in);
  array.wave_speed_m_s = read_pod<double>(in);
  array.antenna_spacing_m = read_pod<double>(in);
  const double lower = read_pod<double>(in);
  const double upper = read_pod<double>(in);
  array.validate();
  AngularGrid grid = build_grid(lower, upper, num_points);

  Eigen::MatrixXd a(2 * array.num_antennas - 1, num_points);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      a(i, j) = read_pod<double>(in);
    }
  }
  return ForwardOperator(std::move(a), std::move(grid), std::move(array));
}

void save_operator_csv(const ForwardOperator & op, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# num_antennas=" << op.num_antennas() << ",num_points=" << op.num_columns()
      << ",lower_rad=" << op.grid().lower_rad() << ",upper_rad=" << op.grid().upper_rad()
      << ",carrier_frequency_hz=" << op.array().carrier_frequency_hz
      << ",wave_speed_m_s=" << op.array().wave_speed_m_s
      << ",antenna_spacing_m=" << op.array().spacing_m() << '\n';
  const auto & a = op.matrix();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out << (j ? "," : "") << a(i, j);
    }
    out << '\n';
  }
}

}  // namespace aps
