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

#include "wifimap/density.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "wifimap/csv.hpp"
#include "wifimap/error.hpp"
#include "wifimap/parallel.hpp"

namespace wifimap {

const char* to_string(Geotype g) {
  switch (g) {
    case Geotype::kUrban: return "urban";
    case Geotype::kSuburban: return "suburban";
    case Geotype::kRural: return "rural";
  }
  return "rural";
}

std::optional<Geotype> geotype_from_string(std::string_view text) {
  std::string t;
  for (char c : trim(text)) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (auto g : kAllGeotypes) {
    if (t == to_string(g)) return g;
  }
  return std::nullopt;
}

std::vector<Premise> read_premises_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_id = table.require_column("premise_id");
  const auto c_lat = table.require_column("lat");
  const auto c_lon = table.require_column("lon");
  const auto c_area = table.require_column("floor_area_m2");
  const auto c_floors = table.require_column("floors");
  const auto c_use = table.require_column("use");
  std::vector<Premise> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("premises CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    Premise p;
    p.premise_id = std::string(trim(row[c_id]));
    const auto lat = parse_double(row[c_lat]);
    const auto lon = parse_double(row[c_lon]);
    const auto area = parse_double(row[c_area]);
    const auto floors = parse_int(row[c_floors]);
    if (p.premise_id.empty()) fail(ErrorKind::kFormat, where + ": empty premise_id");
    if (!lat || !lon || !is_valid({*lat, *lon})) fail(ErrorKind::kFormat, where + ": bad location");
    if (!area || !std::isfinite(*area) || !(*area > 0.0)) {
      fail(ErrorKind::kFormat, where + ": floor_area_m2 must be positive");
    }
    if (!floors || *floors < 1) fail(ErrorKind::kFormat, where + ": floors must be >= 1");
    std::string use;
    for (char c : trim(row[c_use])) use.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (use == "residential") {
      p.use = PremiseUse::kResidential;
    } else if (use == "business") {
      p.use = PremiseUse::kBusiness;
    } else {
      fail(ErrorKind::kFormat, where + ": use must be residential or business");
    }
    p.location = {*lat, *lon};
    p.floor_area_m2 = *area;
    p.floors = static_cast<int>(*floors);
    out.push_back(std::move(p));
  }
  return out;
}

void validate_radii(std::span<const double> radii) {
  if (radii.empty()) fail(ErrorKind::kInvalidParameter, "at least one buffer radius is required");
  for (double r : radii) buffer_area_km2(r);
}

std::vector<DensityRecord> compute_buffer_densities(std::span<const ApRecord> aps,
                                                    std::span<const Premise> premises,
                                                    std::span<const double> radii,
                                                    unsigned threads) {
  validate_radii(radii);
  if (aps.empty()) return {};
  std::vector<double> sorted_radii(radii.begin(), radii.end());
  std::sort(sorted_radii.begin(), sorted_radii.end());
  sorted_radii.erase(std::unique(sorted_radii.begin(), sorted_radii.end()), sorted_radii.end());
  const double cell = sorted_radii.back();

  const auto ap_points = locations_of(aps);
  std::vector<GeoPoint> premise_points;
  premise_points.reserve(premises.size());
  for (const auto& p : premises) premise_points.push_back(p.location);
  const GeoPoint origin = centroid(ap_points);
  const SpatialIndex ap_index(ap_points, origin, cell);
  const SpatialIndex premise_index(premise_points, origin, cell);

  // Records are laid out by AP position then radius, so each worker writes
  // a disjoint slice.
  const std::size_t k = sorted_radii.size();
  std::vector<DensityRecord> out(aps.size() * k);
  parallel_for(aps.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double r = sorted_radii[j];
      const double area = buffer_area_km2(r);
      DensityRecord& rec = out[i * k + j];
      rec.bssid = aps[i].bssid;
      rec.radius_m = r;
      rec.ap_count = ap_index.count_within(aps[i].location, r);
      rec.premises_count = premise_index.count_within(aps[i].location, r);
      rec.ap_density_per_km2 = static_cast<double>(rec.ap_count) / area;
      rec.premises_density_per_km2 = static_cast<double>(rec.premises_count) / area;
    }
  });
  std::stable_sort(out.begin(), out.end(), [](const DensityRecord& a, const DensityRecord& b) {
    if (a.bssid != b.bssid) return a.bssid < b.bssid;
    return a.radius_m < b.radius_m;
  });
  return out;
}

std::string write_density_csv(std::span<const DensityRecord> records) {
  CsvWriter w{"bssid", "radius_m", "ap_count", "premises_count", "ap_density_per_km2",
              "premises_density_per_km2"};
  for (const auto& r : records) {
    w.row({r.bssid, format_exact(r.radius_m), std::to_string(r.ap_count),
           std::to_string(r.premises_count), format_fixed(r.ap_density_per_km2),
           format_fixed(r.premises_density_per_km2)});
  }
  return w.str();
}

std::vector<DensityRecord> read_density_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_bssid = table.require_column("bssid");
  const auto c_r = table.require_column("radius_m");
  const auto c_ap = table.require_column("ap_count");
  const auto c_pr = table.require_column("premises_count");
  const auto c_apd = table.require_column("ap_density_per_km2");
  const auto c_prd = table.require_column("premises_density_per_km2");
  std::vector<DensityRecord> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("density CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    const auto mac = canonical_mac(row[c_bssid]);
    const auto r = parse_double(row[c_r]);
    const auto ap = parse_int(row[c_ap]);
    const auto pr = parse_int(row[c_pr]);
    const auto apd = parse_double(row[c_apd]);
    const auto prd = parse_double(row[c_prd]);
    if (!mac || !r || !(*r > 0.0) || !ap || *ap < 1 || !pr || *pr < 0 || !apd || !prd ||
        !(*apd >= 0.0) || !(*prd >= 0.0)) {
      fail(ErrorKind::kFormat, where + ": invalid record");
    }
    // Densities are stored rounded; rebuild them from the counts so a
    // reloaded table equals the computed one.
    const double area = buffer_area_km2(*r);
    const double ap_density = static_cast<double>(*ap) / area;
    const double premises_density = static_cast<double>(*pr) / area;
    if (std::abs(ap_density - *apd) > 1e-6 * std::max(1.0, ap_density) ||
        std::abs(premises_density - *prd) > 1e-6 * std::max(1.0, premises_density)) {
      fail(ErrorKind::kFormat, where + ": densities do not match counts over the buffer area");
    }
    out.push_back({*mac, *r, static_cast<std::size_t>(*ap), static_cast<std::size_t>(*pr),
                   ap_density, premises_density});
  }
  return out;
}

std::vector<bool> edge_flags(std::span<const DensityRecord> records, std::span<const ApRecord> aps) {
  const auto points = locations_of(aps);
  const BoundingBox box = bounding_box(points);
  std::map<std::string_view, GeoPoint> where;
  for (const auto& ap : aps) where.emplace(ap.bssid, ap.location);
  std::vector<bool> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = where.find(r.bssid);
    out.push_back(it != where.end() && buffer_exceeds(box, {it->second, r.radius_m}));
  }
  return out;
}

std::array<double, 10> decile_means(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < kMinDecileRecords) {
    fail(ErrorKind::kInvalidParameter, fmt::format("deciles need at least 10 values, got {}", n));
  }
  std::sort(values.begin(), values.end());
  std::array<double, 10> sums{};
  std::array<std::size_t, 10> counts{};
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t k = (10 * j + n - 1) / n;  // ceil(10 j / n), in 1..10
    sums[k - 1] += values[j - 1];
    ++counts[k - 1];
  }
  std::array<double, 10> means{};
  for (std::size_t k = 0; k < 10; ++k) means[k] = sums[k] / static_cast<double>(counts[k]);
  return means;
}

DecileResult decile_summary(
    std::span<const DensityRecord> records,
    const std::function<std::optional<Geotype>(std::string_view bssid)>& geotype_of) {
  std::map<std::pair<double, Geotype>, std::vector<double>> groups;
  for (const auto& r : records) {
    if (auto g = geotype_of(r.bssid)) groups[{r.radius_m, *g}].push_back(r.ap_density_per_km2);
  }
  DecileResult result;
  for (auto& [key, values] : groups) {
    if (values.size() < kMinDecileRecords) {
      result.warnings.push_back(fmt::format("decile group radius={} geotype={} has only {} records",
                                            key.first, to_string(key.second), values.size()));
      continue;
    }
    DecileSummary s;
    s.radius_m = key.first;
    s.geotype = key.second;
    s.n_records = values.size();
    s.overall_mean = std::accumulate(values.begin(), values.end(), 0.0) /
                     static_cast<double>(values.size());
    s.decile_means = decile_means(std::move(values));
    result.summaries.push_back(s);
  }
  return result;
}

std::string write_decile_csv(std::span<const DecileSummary> summaries) {
  std::vector<std::string> header{"radius_m", "geotype", "n_records", "overall_mean"};
  for (int k = 1; k <= 10; ++k) header.push_back(fmt::format("d{}", k));
  CsvWriter w(header);
  for (const auto& s : summaries) {
    std::vector<std::string> row{format_exact(s.radius_m), to_string(s.geotype),
                                 std::to_string(s.n_records), format_fixed(s.overall_mean)};
    for (double m : s.decile_means) row.push_back(format_fixed(m));
    w.row(row);
  }
  return w.str();
}

std::vector<DecileSummary> read_decile_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_r = table.require_column("radius_m");
  const auto c_g = table.require_column("geotype");
  const auto c_n = table.require_column("n_records");
  const auto c_mean = table.require_column("overall_mean");
  std::array<std::size_t, 10> c_d{};
  for (int k = 0; k < 10; ++k) c_d[k] = table.require_column(fmt::format("d{}", k + 1));
  std::vector<DecileSummary> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("decile CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    DecileSummary s;
    const auto r = parse_double(row[c_r]);
    const auto g = geotype_from_string(row[c_g]);
    const auto n = parse_int(row[c_n]);
    const auto mean = parse_double(row[c_mean]);
    if (!r || !g || !n || *n < 0 || !mean) fail(ErrorKind::kFormat, where + ": invalid record");
    s.radius_m = *r;
    s.geotype = *g;
    s.n_records = static_cast<std::size_t>(*n);
    s.overall_mean = *mean;
    for (int k = 0; k < 10; ++k) {
      const auto d = parse_double(row[c_d[k]]);
      if (!d) fail(ErrorKind::kFormat, where + ": invalid decile value");
      s.decile_means[k] = *d;
    }
    out.push_back(s);
  }
  return out;
}

namespace {

void validate_grid(const GridSpec& spec) {
  if (!(spec.cell_size_m > 0.0) || !std::isfinite(spec.cell_size_m)) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("grid cell size must be positive, got {}", spec.cell_size_m));
  }
  if (!std::isfinite(spec.offset_dx_m) || !std::isfinite(spec.offset_dy_m)) {
    fail(ErrorKind::kInvalidParameter, "grid offsets must be finite");
  }
}

double wrap_offset(double offset, double size) {
  double r = std::fmod(offset, size);
  if (r < 0.0) r += size;
  return r >= size ? 0.0 : r;
}

}  // namespace

GridCounts grid_aggregate(std::span<const GeoPoint> points, const GridSpec& spec) {
  validate_grid(spec);
  const LocalProjection proj(spec.origin);
  const double size = spec.cell_size_m;
  const double dx = wrap_offset(spec.offset_dx_m, size);
  const double dy = wrap_offset(spec.offset_dy_m, size);
  GridCounts counts;
  for (const auto& p : points) {
    const PlanarPoint q = proj.forward(p);
    const GridCell cell{static_cast<std::int64_t>(std::floor((q.x - dx) / size)),
                        static_cast<std::int64_t>(std::floor((q.y - dy) / size))};
    ++counts[cell];
  }
  return counts;
}

MaupRow summarize_grid(const GridCounts& counts, const GridSpec& spec) {
  MaupRow row;
  row.cell_size_m = spec.cell_size_m;
  row.offset_dx_m = wrap_offset(spec.offset_dx_m, spec.cell_size_m);
  row.offset_dy_m = wrap_offset(spec.offset_dy_m, spec.cell_size_m);
  row.n_cells = counts.size();
  if (counts.empty()) return row;
  const double cell_km2 = spec.cell_size_m * spec.cell_size_m / 1e6;
  double sum = 0.0;
  for (const auto& [cell, n] : counts) {
    row.total_count += n;
    row.max_cell_count = std::max(row.max_cell_count, n);
    sum += static_cast<double>(n) / cell_km2;
  }
  row.mean_density = sum / static_cast<double>(counts.size());
  double ss = 0.0;
  for (const auto& [cell, n] : counts) {
    const double d = static_cast<double>(n) / cell_km2 - row.mean_density;
    ss += d * d;
  }
  row.variance = ss / static_cast<double>(counts.size());
  return row;
}

namespace {

std::vector<MaupScaleSummary> scale_summaries(const std::vector<MaupRow>& rows) {
  std::map<double, std::vector<const MaupRow*>> by_size;
  for (const auto& r : rows) by_size[r.cell_size_m].push_back(&r);
  std::vector<MaupScaleSummary> out;
  for (const auto& [size, group] : by_size) {
    MaupScaleSummary s;
    s.cell_size_m = size;
    std::size_t lo = group.front()->max_cell_count;
    std::size_t hi = lo;
    for (const auto* r : group) {
      s.mean_density += r->mean_density;
      s.mean_variance += r->variance;
      lo = std::min(lo, r->max_cell_count);
      hi = std::max(hi, r->max_cell_count);
    }
    s.mean_density /= static_cast<double>(group.size());
    s.mean_variance /= static_cast<double>(group.size());
    s.zoning_range = hi - lo;
    out.push_back(s);
  }
  return out;
}

}  // namespace

MaupReport maup_experiment(std::span<const GeoPoint> points, std::span<const double> cell_sizes,
                           std::size_t offsets_per_size, std::optional<GeoPoint> origin) {
  if (cell_sizes.size() < 2) fail(ErrorKind::kInvalidParameter, "MAUP needs at least two cell sizes");
  if (offsets_per_size < 2) fail(ErrorKind::kInvalidParameter, "MAUP needs at least two offsets");
  const GeoPoint o = origin.value_or(centroid(points));
  MaupReport report;
  report.total_points = points.size();
  for (double size : cell_sizes) {
    for (std::size_t i = 0; i < offsets_per_size; ++i) {
      const double off = size * static_cast<double>(i) / static_cast<double>(offsets_per_size);
      const GridSpec spec{size, off, off, o};
      report.rows.push_back(summarize_grid(grid_aggregate(points, spec), spec));
    }
  }
  report.scales = scale_summaries(report.rows);
  return report;
}

std::string write_maup_csv(const MaupReport& report) {
  CsvWriter w{"cell_size_m", "offset_dx", "offset_dy", "n_cells", "mean_density", "variance",
              "max_cell_count"};
  for (const auto& r : report.rows) {
    w.row({format_exact(r.cell_size_m), format_fixed(r.offset_dx_m), format_fixed(r.offset_dy_m),
           std::to_string(r.n_cells), format_fixed(r.mean_density), format_fixed(r.variance),
           std::to_string(r.max_cell_count)});
  }
  return w.str();
}

MaupReport read_maup_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_size = table.require_column("cell_size_m");
  const auto c_dx = table.require_column("offset_dx");
  const auto c_dy = table.require_column("offset_dy");
  const auto c_n = table.require_column("n_cells");
  const auto c_mean = table.require_column("mean_density");
  const auto c_var = table.require_column("variance");
  const auto c_max = table.require_column("max_cell_count");
  MaupReport report;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("MAUP CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    const auto size = parse_double(row[c_size]);
    const auto dx = parse_double(row[c_dx]);
    const auto dy = parse_double(row[c_dy]);
    const auto n = parse_int(row[c_n]);
    const auto mean = parse_double(row[c_mean]);
    const auto var = parse_double(row[c_var]);
    const auto mx = parse_int(row[c_max]);
    if (!size || !(*size > 0.0) || !dx || !dy || !n || *n < 0 || !mean || !var || !mx || *mx < 0) {
      fail(ErrorKind::kFormat, where + ": invalid record");
    }
    MaupRow r{*size, *dx, *dy, static_cast<std::size_t>(*n), *mean, *var,
              static_cast<std::size_t>(*mx), 0};
    // Occupied-cell mean density times occupied area recovers the count.
    r.total_count = static_cast<std::size_t>(
        std::llround(r.mean_density * static_cast<double>(r.n_cells) * r.cell_size_m * r.cell_size_m / 1e6));
    report.rows.push_back(r);
  }
  if (!report.rows.empty()) report.total_points = report.rows.front().total_count;
  report.scales = scale_summaries(report.rows);
  return report;
}

}  // namespace wifimap
