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

#include "wifimap/compare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "wifimap/csv.hpp"
#include "wifimap/error.hpp"

namespace wifimap {

std::map<std::string, std::string, std::less<>> assign_aps_to_areas(std::span<const ApRecord> aps,
                                                                    std::span<const StatArea> areas) {
  std::map<std::string, std::string, std::less<>> out;
  if (aps.empty() || areas.empty()) return out;
  const AreaLocator locator(areas);
  for (const auto& ap : aps) out.emplace(ap.bssid, areas[*locator.nearest(ap.location)].area_id);
  return out;
}

std::map<std::string, Geotype, std::less<>> geotypes_by_bssid(std::span<const ApRecord> aps,
                                                              std::span<const StatArea> areas) {
  std::map<std::string, Geotype, std::less<>> out;
  if (aps.empty() || areas.empty()) return out;
  const AreaLocator locator(areas);
  for (const auto& ap : aps) out.emplace(ap.bssid, areas[*locator.nearest(ap.location)].geotype);
  return out;
}

std::vector<ComparisonRow> join_observed_predicted(
    std::span<const DensityRecord> records,
    const std::map<std::string, std::string, std::less<>>& ap_area,
    std::span<const PredictionRow> predicted, std::span<const double> radii,
    const InflationRule& rule) {
  struct Accum {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<std::pair<std::string_view, double>, Accum> observed;
  for (const auto& r : records) {
    auto it = ap_area.find(r.bssid);
    if (it == ap_area.end()) {
      fail(ErrorKind::kInvalidParameter,
           fmt::format("AP {} has no area assignment", r.bssid));
    }
    auto& acc = observed[{it->second, r.radius_m}];
    acc.sum += r.ap_density_per_km2;
    ++acc.n;
  }

  std::set<std::pair<std::string_view, Scenario>> seen;
  std::vector<ComparisonRow> rows;
  for (const auto& p : predicted) {
    if (!seen.emplace(p.area_id, p.scenario).second) {
      fail(ErrorKind::kInvalidParameter,
           fmt::format("area '{}' appears twice for scenario {}", p.area_id, to_string(p.scenario)));
    }
    for (double radius : radii) {
      ComparisonRow row;
      row.area_id = p.area_id;
      row.geotype = p.geotype;
      row.radius_m = radius;
      row.scenario = p.scenario;
      row.predicted_density = p.predicted_density_per_km2;
      if (auto it = observed.find({p.area_id, radius}); it != observed.end()) {
        row.n_aps = it->second.n;
        row.observed_mean_density = it->second.sum / static_cast<double>(it->second.n);
      } else {
        row.no_observations = true;
      }
      if (row.predicted_density > 0.0) {
        row.ratio = row.observed_mean_density / row.predicted_density;
      } else {
        row.predicted_zero = true;
      }
      row.density_inflation = radius == rule.radius_m && row.n_aps > 0 &&
                              row.observed_mean_density > row.predicted_density * (1.0 + rule.threshold);
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.geotype != b.geotype) return a.geotype < b.geotype;
    if (a.radius_m != b.radius_m) return a.radius_m < b.radius_m;
    if (a.area_id != b.area_id) return a.area_id < b.area_id;
    return a.scenario < b.scenario;
  });
  return rows;
}

namespace {

std::string flags_of(const ComparisonRow& r) {
  std::vector<std::string_view> flags;
  if (r.no_observations) flags.push_back("no_aps");
  if (r.predicted_zero) flags.push_back("predicted_zero");
  if (r.density_inflation) flags.push_back("density_inflation");
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out += ';';
    out += flags[i];
  }
  return out;
}

}  // namespace

std::string write_comparison_csv(std::span<const ComparisonRow> rows) {
  CsvWriter w{"area_id", "geotype", "radius_m", "scenario", "n_aps", "observed_mean_density",
              "predicted_density", "ratio", "flags"};
  for (const auto& r : rows) {
    w.row({r.area_id, to_string(r.geotype), format_exact(r.radius_m), to_string(r.scenario),
           std::to_string(r.n_aps), format_fixed(r.observed_mean_density),
           format_fixed(r.predicted_density), r.ratio ? format_fixed(*r.ratio) : std::string(),
           flags_of(r)});
  }
  return w.str();
}

std::vector<ComparisonRow> read_comparison_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_id = table.require_column("area_id");
  const auto c_geo = table.require_column("geotype");
  const auto c_r = table.require_column("radius_m");
  const auto c_sc = table.require_column("scenario");
  const auto c_n = table.require_column("n_aps");
  const auto c_obs = table.require_column("observed_mean_density");
  const auto c_pred = table.require_column("predicted_density");
  const auto c_ratio = table.require_column("ratio");
  const auto c_flags = table.require_column("flags");
  std::vector<ComparisonRow> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("comparison CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    ComparisonRow r;
    r.area_id = row[c_id];
    const auto geo = geotype_from_string(row[c_geo]);
    const auto radius = parse_double(row[c_r]);
    const auto sc = scenario_from_string(row[c_sc]);
    const auto n = parse_int(row[c_n]);
    const auto obs = parse_double(row[c_obs]);
    const auto pred = parse_double(row[c_pred]);
    if (!geo || !radius || !sc || !n || *n < 0 || !obs || !pred) {
      fail(ErrorKind::kFormat, where + ": invalid record");
    }
    r.geotype = *geo;
    r.radius_m = *radius;
    r.scenario = *sc;
    r.n_aps = static_cast<std::size_t>(*n);
    r.observed_mean_density = *obs;
    r.predicted_density = *pred;
    if (!trim(row[c_ratio]).empty()) {
      r.ratio = parse_double(row[c_ratio]);
      if (!r.ratio) fail(ErrorKind::kFormat, where + ": bad ratio");
    }
    const std::string_view flags = row[c_flags];
    r.no_observations = flags.find("no_aps") != std::string_view::npos;
    r.predicted_zero = flags.find("predicted_zero") != std::string_view::npos;
    r.density_inflation = flags.find("density_inflation") != std::string_view::npos;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Building> read_buildings_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_id = table.require_column("building_id");
  const auto c_count = table.require_column("actual_ap_count");
  const auto c_area = table.require_column("floor_area_m2");
  std::vector<Building> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("buildings CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    const auto count = parse_int(row[c_count]);
    const auto area = parse_double(row[c_area]);
    if (trim(row[c_id]).empty() || !count || *count < 0 || !area || !std::isfinite(*area)) {
      fail(ErrorKind::kFormat, where + ": invalid record");
    }
    out.push_back({std::string(trim(row[c_id])), *count, *area});
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::kInvalidParameter, "spearman needs equal-length series");
  const std::size_t n = a.size();
  if (n < 2) return std::nullopt;
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

ValidationSummary summarize_validation(std::span<const ValidationRow> rows) {
  ValidationSummary s;
  s.n = rows.size();
  if (rows.empty()) return s;
  std::vector<double> actual;
  std::vector<double> predicted;
  double abs_err = 0.0;
  for (const auto& r : rows) {
    actual.push_back(static_cast<double>(r.actual_ap_count));
    predicted.push_back(static_cast<double>(r.predicted_ap_count));
    abs_err += std::abs(static_cast<double>(r.actual_ap_count - r.predicted_ap_count));
  }
  s.spearman = spearman(actual, predicted);
  s.mean_absolute_error = abs_err / static_cast<double>(rows.size());
  return s;
}

ValidationResult validate_buildings(std::span<const Building> buildings, double coverage_m2) {
  if (!(coverage_m2 > 0.0) || !std::isfinite(coverage_m2)) {
    fail(ErrorKind::kInvalidParameter, "validation coverage area must be positive");
  }
  ValidationResult result;
  for (const auto& b : buildings) {
    if (!(b.floor_area_m2 > 0.0)) {
      result.warnings.push_back(
          fmt::format("building '{}' rejected: floor area {} is not positive", b.building_id,
                      b.floor_area_m2));
      continue;
    }
    result.rows.push_back({b.building_id, b.actual_ap_count, b.floor_area_m2,
                           aps_for_floor_area(b.floor_area_m2, coverage_m2), 0});
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const ValidationRow& a, const ValidationRow& b) {
    if (a.actual_ap_count != b.actual_ap_count) return a.actual_ap_count > b.actual_ap_count;
    return id_less(a.building_id, b.building_id);
  });
  for (std::size_t i = 0; i < result.rows.size(); ++i) result.rows[i].rank = i + 1;
  result.summary = summarize_validation(result.rows);
  return result;
}

std::string write_validation_csv(std::span<const ValidationRow> rows) {
  CsvWriter w{"rank", "building_id", "actual_ap_count", "floor_area_m2", "predicted_ap_count"};
  for (const auto& r : rows) {
    w.row({std::to_string(r.rank), r.building_id, std::to_string(r.actual_ap_count),
           format_exact(r.floor_area_m2), std::to_string(r.predicted_ap_count)});
  }
  return w.str();
}

std::vector<ValidationRow> read_validation_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_rank = table.require_column("rank");
  const auto c_id = table.require_column("building_id");
  const auto c_actual = table.require_column("actual_ap_count");
  const auto c_area = table.require_column("floor_area_m2");
  const auto c_pred = table.require_column("predicted_ap_count");
  std::vector<ValidationRow> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("validation CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    const auto rank = parse_int(row[c_rank]);
    const auto actual = parse_int(row[c_actual]);
    const auto area = parse_double(row[c_area]);
    const auto pred = parse_int(row[c_pred]);
    if (!rank || *rank < 1 || !actual || !area || !pred) fail(ErrorKind::kFormat, where + ": invalid record");
    out.push_back({row[c_id], *actual, *area, *pred, static_cast<std::size_t>(*rank)});
  }
  std::sort(out.begin(), out.end(),
            [](const ValidationRow& a, const ValidationRow& b) { return a.rank < b.rank; });
  return out;
}

}  // namespace wifimap
