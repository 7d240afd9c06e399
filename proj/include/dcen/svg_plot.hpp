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

#ifndef DCEN_SVG_PLOT_HPP_
#define DCEN_SVG_PLOT_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace dcen {

/// Writes a single-series line plot (markers at every point) as an SVG
/// image. Deterministic output for identical inputs.
void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace dcen

#endif  // DCEN_SVG_PLOT_HPP_
