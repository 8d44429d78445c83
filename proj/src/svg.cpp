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

#include "wifimap/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wifimap/error.hpp"

namespace wifimap {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

// 1, 2 or 5 times a power of ten, at least max/5.
double nice_step(double max) {
  if (!(max > 0.0)) return 1.0;
  const double raw = max / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string tick_label(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return fmt::format("{:.0f}", v);
  return fmt::format("{:.2f}", v);
}

// Draws the frame, title, y grid and labels; returns the y-axis maximum.
double draw_axes(SvgWriter& svg, std::string_view title, double data_max, std::string_view y_label) {
  const double step = nice_step(data_max);
  const double y_max = std::max(step, std::ceil(data_max / step) * step);
  const double plot_h = kHeight - kTop - kBottom;
  const double plot_w = kWidth - kLeft - kRight;
  svg.rect(0, 0, kWidth, kHeight, "white");
  svg.text(kWidth / 2.0, 24.0, title, 15.0, "middle");
  for (double v = 0.0; v <= y_max + step / 2.0; v += step) {
    const double y = kTop + plot_h * (1.0 - v / y_max);
    svg.line(kLeft, y, kLeft + plot_w, y, "#dddddd");
    svg.text(kLeft - 6.0, y + 4.0, tick_label(v), 11.0, "end");
  }
  svg.line(kLeft, kTop, kLeft, kTop + plot_h, "black");
  svg.line(kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h, "black");
  svg.text(16.0, kTop - 12.0, y_label, 11.0, "start");
  return y_max;
}

void draw_legend(SvgWriter& svg, std::span<const std::string> labels,
                 std::span<const std::string> colors) {
  const double x = kWidth - kRight + 16.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + 10.0 + 20.0 * static_cast<double>(i);
    svg.rect(x, y - 9.0, 12.0, 12.0, colors[i]);
    svg.text(x + 18.0, y + 1.0, labels[i], 11.0);
  }
}

}  // namespace

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

SvgWriter::SvgWriter(double width, double height) : width_(width), height_(height) {}

void SvgWriter::rect(double x, double y, double w, double h, std::string_view fill,
                     std::string_view stroke) {
  body_ += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}" stroke="{}"/>)",
                       x, y, w, h, fill, stroke);
  body_ += '\n';
}

void SvgWriter::line(double x1, double y1, double x2, double y2, std::string_view stroke,
                     double stroke_width) {
  body_ += fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-width="{:.2f}"/>)",
                       x1, y1, x2, y2, stroke, stroke_width);
  body_ += '\n';
}

void SvgWriter::circle(double cx, double cy, double r, std::string_view fill) {
  body_ += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="{:.2f}" fill="{}"/>)", cx, cy, r, fill);
  body_ += '\n';
}

void SvgWriter::polyline(std::span<const std::array<double, 2>> points, std::string_view stroke,
                         double stroke_width) {
  std::string pts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) pts += ' ';
    pts += fmt::format("{:.2f},{:.2f}", points[i][0], points[i][1]);
  }
  body_ += fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="{:.2f}"/>)",
                       pts, stroke, stroke_width);
  body_ += '\n';
}

void SvgWriter::text(double x, double y, std::string_view content, double size,
                     std::string_view anchor) {
  body_ += fmt::format(
      R"(<text x="{:.2f}" y="{:.2f}" font-family="sans-serif" font-size="{:.1f}" text-anchor="{}">{}</text>)",
      x, y, size, anchor, xml_escape(content));
  body_ += '\n';
}

std::string SvgWriter::str() const {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\">\n{}</svg>\n",
      width_, height_, width_, height_, body_);
}

std::string grouped_bar_chart_svg(std::string_view title, std::span<const std::string> categories,
                                  std::span<const BarSeries> series, std::string_view y_label) {
  double data_max = 0.0;
  for (const auto& s : series) {
    if (s.values.size() != categories.size()) {
      fail(ErrorKind::kInvalidParameter, "bar series length does not match categories");
    }
    for (double v : s.values) data_max = std::max(data_max, v);
  }
  SvgWriter svg(kWidth, kHeight);
  const double y_max = draw_axes(svg, title, data_max, y_label);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double group_w = categories.empty() ? plot_w : plot_w / static_cast<double>(categories.size());
  const double bar_w = series.empty() ? 0.0 : group_w * 0.8 / static_cast<double>(series.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c) + group_w * 0.1;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = std::max(0.0, series[s].values[c]);
      const double h = plot_h * v / y_max;
      svg.rect(gx + bar_w * static_cast<double>(s), kTop + plot_h - h, bar_w, h, series[s].color);
    }
    svg.text(kLeft + group_w * (static_cast<double>(c) + 0.5), kTop + plot_h + 16.0, categories[c],
             11.0, "middle");
  }
  std::vector<std::string> labels;
  std::vector<std::string> colors;
  for (const auto& s : series) {
    labels.push_back(s.label);
    colors.push_back(s.color);
  }
  draw_legend(svg, labels, colors);
  return svg.str();
}

std::string point_plot_svg(std::string_view title, std::span<const LineSeries> series,
                           std::string_view x_label, std::string_view y_label) {
  double data_max = 0.0;
  std::size_t n = 0;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) data_max = std::max(data_max, v);
  }
  SvgWriter svg(kWidth, kHeight);
  const double y_max = draw_axes(svg, title, data_max, y_label);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](std::size_t i) {
    return n <= 1 ? kLeft + plot_w / 2.0
                  : kLeft + 10.0 + (plot_w - 20.0) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (const auto& s : series) {
    std::vector<std::array<double, 2>> pts;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      pts.push_back({x_of(i), kTop + plot_h * (1.0 - std::max(0.0, s.values[i]) / y_max)});
    }
    svg.polyline(pts, s.color, 1.5);
    for (const auto& p : pts) svg.circle(p[0], p[1], 3.0, s.color);
  }
  const std::size_t label_every = std::max<std::size_t>(1, (n + 9) / 10);
  for (std::size_t i = 0; i < n; i += label_every) {
    svg.text(x_of(i), kTop + plot_h + 16.0, std::to_string(i + 1), 11.0, "middle");
  }
  svg.text(kLeft + plot_w / 2.0, kHeight - 12.0, x_label, 11.0, "middle");
  std::vector<std::string> labels;
  std::vector<std::string> colors;
  for (const auto& s : series) {
    labels.push_back(s.label);
    colors.push_back(s.color);
  }
  draw_legend(svg, labels, colors);
  return svg.str();
}

}  // namespace wifimap
