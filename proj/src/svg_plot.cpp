// Copyright (c) 2026 the dcen authors.
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

#include "dcen/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dcen {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("write_line_plot_svg: need equal, non-empty series");

  constexpr double kW = 640, kH = 420;
  constexpr double kL = 70, kR = 25, kT = 45, kB = 55;  // margins

  double x_min = *std::min_element(xs.begin(), xs.end());
  double x_max = *std::max_element(xs.begin(), xs.end());
  double y_min = *std::min_element(ys.begin(), ys.end());
  double y_max = *std::max_element(ys.begin(), ys.end());
  if (x_max - x_min < 1e-12) { x_min -= 0.5; x_max += 0.5; }
  if (y_max - y_min < 1e-12) { y_min -= 0.5; y_max += 0.5; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y_min) / (y_max - y_min) * (kH - kT - kB); };

  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write plot " + path.string());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">" << title << "</text>\n";

  // axes
  os << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
     << kH - kB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 18 " << (kT + kH - kB) / 2 << ")\">" << y_label << "</text>\n";

  // ticks: 5 per axis
  for (int i = 0; i <= 4; ++i) {
    const double tx = x_min + (x_max - x_min) * i / 4.0;
    const double ty = y_min + (y_max - y_min) * i / 4.0;
    os << "<line x1=\"" << px(tx) << "\" y1=\"" << kH - kB << "\" x2=\"" << px(tx) << "\" y2=\""
       << kH - kB + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(tx) << "\" y=\"" << kH - kB + 18
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(tx)
       << "</text>\n";
    os << "<line x1=\"" << kL - 5 << "\" y1=\"" << py(ty) << "\" x2=\"" << kL << "\" y2=\""
       << py(ty) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kL - 8 << "\" y=\"" << py(ty) + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(ty)
       << "</text>\n";
  }

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) os << fmt(px(xs[i])) << "," << fmt(py(ys[i])) << " ";
  os << "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    os << "<circle cx=\"" << fmt(px(xs[i])) << "\" cy=\"" << fmt(py(ys[i]))
       << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  os << "</svg>\n";
}

}  // namespace dcen
