// Copyright 2026 The wifimap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WIFIMAP_SVG_HPP_
#define WIFIMAP_SVG_HPP_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wifimap {

// Minimal SVG 1.1 writer. Coordinates are written with two decimals so the
// output is byte-stable.
class SvgWriter {
 public:
  SvgWriter(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none");
  void line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double stroke_width = 1.0);
  void circle(double cx, double cy, double r, std::string_view fill);
  void polyline(std::span<const std::array<double, 2>> points, std::string_view stroke,
                double stroke_width = 1.0);
  void text(double x, double y, std::string_view content, double size = 12.0,
            std::string_view anchor = "start");

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

std::string xml_escape(std::string_view s);

struct BarSeries {
  std::string label;
  std::string color;
  std::vector<double> values;
};

/// Grouped vertical bars. Every series must have categories.size() values.
std::string grouped_bar_chart_svg(std::string_view title, std::span<const std::string> categories,
                                  std::span<const BarSeries> series, std::string_view y_label);

struct LineSeries {
  std::string label;
  std::string color;
  std::vector<double> values;  // y at x = 1..n
};

/// Markers joined point to point, x = 1..n.
std::string point_plot_svg(std::string_view title, std::span<const LineSeries> series,
                           std::string_view x_label, std::string_view y_label);

}  // namespace wifimap

#endif  // WIFIMAP_SVG_HPP_
