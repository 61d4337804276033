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

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "aps/error.hpp"
#include "aps/experiment.hpp"

namespace aps
{

void write_nmse_svg(const ResultTable & table, const std::filesystem::path & path)
{
  constexpr double width = 720.0;
  constexpr double height = 440.0;
  constexpr double left = 70.0;
  constexpr double right = 170.0;
  constexpr double top = 30.0;
  constexpr double bottom = 50.0;
  constexpr std::array<const char *, 6> colors = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t length = 0;
  for (const auto & c : table.curves) {
    length = std::max(length, c.mean_nmse.size());
    for (double v : c.mean_nmse) {
      if (v > 0.0 && std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!(hi > 0.0) || length == 0) {
    return;
  }
  const double y0 = std::floor(std::log10(lo));
  const double y1 = std::max(std::ceil(std::log10(hi)), y0 + 1.0);
  const double x_span = std::max<double>(1.0, static_cast<double>(length - 1));
  auto px = [&](double k) { return left + (width - left - right) * k / x_span; };
  auto py = [&](double v) {
    return top + (height - top - bottom) * (y1 - std::log10(v)) / (y1 - y0);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"18\">" << table.name << ": mean NMSE</text>\n";
  for (double e = y0; e <= y1; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    svg << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << y << "\" y2=\""
        << y << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
        << static_cast<int>(e) << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">iteration (0.." << length - 1 << ")</text>\n";

  for (std::size_t i = 0; i < table.curves.size(); ++i) {
    const auto & c = table.curves[i];
    const char * color = colors[i % colors.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < c.mean_nmse.size(); ++k) {
      if (c.mean_nmse[k] > 0.0 && std::isfinite(c.mean_nmse[k])) {
        svg << px(static_cast<double>(k)) << ',' << py(c.mean_nmse[k]) << ' ';
      }
    }
    svg << "\"/>\n";
    const double ly = top + 20.0 * static_cast<double>(i);
    svg << "<line x1=\"" << width - right + 10 << "\" x2=\"" << width - right + 30 << "\" y1=\""
        << ly << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << c.label
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    fail(ErrorKind::Io, "cannot write " + path.string());
  }
  out << svg.str();
}

}  // namespace aps
