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

#include "wifimap/report.hpp"

#include <map>
#include <set>
#include <string>

#include <fmt/format.h>

#include "wifimap/svg.hpp"

namespace wifimap {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string f2(double v) { return fmt::format("{:.2f}", v); }

void comparison_section(std::string& md, const ReportInputs& in) {
  md += "## Observed versus predicted density\n\n";
  if (!in.comparisons || in.comparisons->empty()) {
    md += "No data.\n\n";
    return;
  }
  struct Group {
    std::size_t areas = 0;
    std::size_t observed_areas = 0;
    double observed = 0.0;
    double predicted = 0.0;
    std::size_t inflated = 0;
  };
  std::map<std::tuple<Geotype, double, Scenario>, Group> groups;
  for (const auto& r : *in.comparisons) {
    auto& g = groups[{r.geotype, r.radius_m, r.scenario}];
    ++g.areas;
    g.predicted += r.predicted_density;
    if (!r.no_observations) {
      ++g.observed_areas;
      g.observed += r.observed_mean_density;
    }
    if (r.density_inflation) ++g.inflated;
  }
  md += "Observed values are buffer densities averaged over the APs assigned to each area "
        "(nearest area centroid); deciles are computed across APs per geotype and radius.\n\n";
  md += "| geotype | radius (m) | scenario | areas | areas with APs | mean observed (APs/km2) | "
        "mean predicted (APs/km2) | inflation flags |\n";
  md += "|---|---|---|---|---|---|---|---|\n";
  for (const auto& [key, g] : groups) {
    const auto& [geo, radius, sc] = key;
    md += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} |\n", to_string(geo), radius,
                      to_string(sc), g.areas, g.observed_areas,
                      g.observed_areas ? f2(g.observed / static_cast<double>(g.observed_areas)) : "n/a",
                      f2(g.predicted / static_cast<double>(g.areas)), g.inflated);
  }
  md += "\n";

  std::map<Geotype, std::size_t> inflated;
  for (const auto& r : *in.comparisons) {
    if (r.density_inflation) ++inflated[r.geotype];
  }
  if (inflated.empty()) {
    md += fmt::format("No density inflation flagged at {} m (threshold: observed more than {:.0f}% "
                      "above predicted).\n\n",
                      in.inflation.radius_m, in.inflation.threshold * 100.0);
  } else {
    for (const auto& [geo, n] : inflated) {
      md += fmt::format("**Density inflation**: {} {} area rows at {} m have observed density more "
                        "than {:.0f}% above predicted; the buffer is likely too small and picks up "
                        "APs from outside the analysis area.\n\n",
                        n, to_string(geo), in.inflation.radius_m, in.inflation.threshold * 100.0);
    }
  }
}

void decile_section(std::string& md, OutputSet& out, const ReportInputs& in) {
  md += "## Density deciles\n\n";
  if (!in.deciles || in.deciles->empty()) {
    md += "No data.\n\n";
    return;
  }
  md += "| geotype | radius (m) | records | mean |";
  for (int k = 1; k <= 10; ++k) md += fmt::format(" d{} |", k);
  md += "\n|---|---|---|---|";
  for (int k = 1; k <= 10; ++k) md += "---|";
  md += "\n";
  std::set<Geotype> geotypes;
  for (const auto& s : *in.deciles) {
    geotypes.insert(s.geotype);
    md += fmt::format("| {} | {} | {} | {} |", to_string(s.geotype), s.radius_m, s.n_records,
                      f2(s.overall_mean));
    for (double m : s.decile_means) md += fmt::format(" {} |", f2(m));
    md += "\n";
  }
  md += "\n";
  std::vector<std::string> categories;
  for (int k = 1; k <= 10; ++k) categories.push_back(fmt::format("D{}", k));
  for (auto geo : geotypes) {
    std::vector<BarSeries> series;
    for (const auto& s : *in.deciles) {
      if (s.geotype != geo) continue;
      series.push_back({fmt::format("{} m buffer", s.radius_m),
                        kPalette[series.size() % std::size(kPalette)],
                        std::vector<double>(s.decile_means.begin(), s.decile_means.end())});
    }
    const auto name = fmt::format("plots/deciles_{}.svg", to_string(geo));
    out.add(name, grouped_bar_chart_svg(fmt::format("AP density by decile: {}", to_string(geo)),
                                        categories, series, "APs per km2"));
    md += fmt::format("![{} deciles]({})\n\n", to_string(geo), name);
  }
}

void validation_section(std::string& md, OutputSet& out, const ReportInputs& in) {
  md += "## Building-level validation\n\n";
  if (!in.validations || in.validations->empty()) {
    md += "No data.\n\n";
    return;
  }
  const auto summary = summarize_validation(*in.validations);
  md += fmt::format("- buildings: {}\n- Spearman rank correlation: {}\n- mean absolute error: {} "
                    "APs\n\n",
                    summary.n, summary.spearman ? fmt::format("{:.4f}", *summary.spearman) : "n/a",
                    fmt::format("{:.4f}", summary.mean_absolute_error));
  std::vector<LineSeries> series(2);
  series[0] = {"actual", kPalette[0], {}};
  series[1] = {"predicted", kPalette[3], {}};
  for (const auto& r : *in.validations) {
    series[0].values.push_back(static_cast<double>(r.actual_ap_count));
    series[1].values.push_back(static_cast<double>(r.predicted_ap_count));
  }
  out.add("plots/validation.svg",
          point_plot_svg("Wi-Fi APs per building: actual versus predicted", series,
                         "building rank (most APs first)", "APs"));
  md += "![validation](plots/validation.svg)\n\n";
}

void maup_section(std::string& md, const ReportInputs& in) {
  md += "## Aggregation sensitivity (grid scale and zoning)\n\n";
  if (!in.maup || in.maup->rows.empty()) {
    md += "No data.\n\n";
    return;
  }
  bool conserved = true;
  for (const auto& r : in.maup->rows) conserved = conserved && r.total_count == in.maup->total_points;
  md += fmt::format("Points: {}. Totals conserved across all {} grid specs: {}.\n\n",
                    in.maup->total_points, in.maup->rows.size(), conserved ? "yes" : "NO");
  md += "| cell size (m) | mean density (per km2) | mean variance | zoning range (max cell count) |\n";
  md += "|---|---|---|---|\n";
  for (const auto& s : in.maup->scales) {
    md += fmt::format("| {} | {} | {} | {} |\n", s.cell_size_m, f2(s.mean_density),
                      f2(s.mean_variance), s.zoning_range);
  }
  md += "\n";
}

void edge_section(std::string& md, const ReportInputs& in) {
  md += "## Edge effects\n\n";
  if (!in.edges || in.edges->records == 0) {
    md += "No data.\n\n";
    return;
  }
  md += fmt::format("{} of {} buffer records extend beyond the AP bounding box and may undercount "
                    "neighbours (not corrected).\n\n",
                    in.edges->beyond_bounds, in.edges->records);
}

}  // namespace

OutputSet emit_report(const ReportInputs& inputs) {
  OutputSet out;
  std::string md = "# Wi-Fi access point density report\n\n";
  comparison_section(md, inputs);
  decile_section(md, out, inputs);
  validation_section(md, out, inputs);
  maup_section(md, inputs);
  edge_section(md, inputs);

  if (inputs.comparisons) out.add("comparison.csv", write_comparison_csv(*inputs.comparisons));
  if (inputs.deciles) out.add("deciles.csv", write_decile_csv(*inputs.deciles));
  if (inputs.validations) out.add("validation.csv", write_validation_csv(*inputs.validations));
  if (inputs.maup) out.add("maup.csv", write_maup_csv(*inputs.maup));
  out.add("report.md", std::move(md));
  return out;
}

}  // namespace wifimap
