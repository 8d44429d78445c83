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

#ifndef WIFIMAP_DENSITY_HPP_
#define WIFIMAP_DENSITY_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wifimap/geo.hpp"
#include "wifimap/geotype.hpp"
#include "wifimap/ingest.hpp"

namespace wifimap {

inline constexpr std::array<double, 3> kDefaultRadiiM = {100.0, 200.0, 300.0};

enum class PremiseUse { kResidential, kBusiness };

struct Premise {
  std::string premise_id;
  GeoPoint location;
  double floor_area_m2 = 0.0;
  int floors = 1;
  PremiseUse use = PremiseUse::kResidential;
};

std::vector<Premise> read_premises_csv(std::string_view text);

struct DensityRecord {
  std::string bssid;
  double radius_m = 0.0;
  std::size_t ap_count = 0;  // includes the AP itself
  std::size_t premises_count = 0;
  double ap_density_per_km2 = 0.0;
  double premises_density_per_km2 = 0.0;

  friend bool operator==(const DensityRecord&, const DensityRecord&) = default;
};

/// Throws kInvalidParameter for an empty list or a non-positive radius.
void validate_radii(std::span<const double> radii);

/// Counts APs and premises inside a buffer of every radius around every AP.
/// Output is ordered by (bssid, radius) whatever the thread count.
std::vector<DensityRecord> compute_buffer_densities(std::span<const ApRecord> aps,
                                                    std::span<const Premise> premises,
                                                    std::span<const double> radii,
                                                    unsigned threads = 1);

std::string write_density_csv(std::span<const DensityRecord> records);
std::vector<DensityRecord> read_density_csv(std::string_view text);

/// Per record, whether its buffer crosses the AP bounding box. Records
/// whose bssid is not in `aps` are reported as false.
std::vector<bool> edge_flags(std::span<const DensityRecord> records,
                             std::span<const ApRecord> aps);

struct DecileSummary {
  double radius_m = 0.0;
  Geotype geotype = Geotype::kUrban;
  std::array<double, 10> decile_means{};
  double overall_mean = 0.0;
  std::size_t n_records = 0;
};

struct DecileResult {
  std::vector<DecileSummary> summaries;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kMinDecileRecords = 10;

/// Sorted ascending; rank j (1-based) of n falls in decile ceil(10 j / n).
/// Requires at least ten values.
std::array<double, 10> decile_means(std::vector<double> values);

/// Groups ap_density_per_km2 by (radius, geotype). Records whose bssid has
/// no geotype are ignored; groups under ten records are dropped with a
/// warning. Ordered by (radius, geotype).
DecileResult decile_summary(
    std::span<const DensityRecord> records,
    const std::function<std::optional<Geotype>(std::string_view bssid)>& geotype_of);

std::string write_decile_csv(std::span<const DecileSummary> summaries);
std::vector<DecileSummary> read_decile_csv(std::string_view text);

struct GridSpec {
  double cell_size_m = 1000.0;
  double offset_dx_m = 0.0;
  double offset_dy_m = 0.0;
  GeoPoint origin;
};

struct GridCell {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

using GridCounts = std::map<GridCell, std::size_t>;

/// Projects about spec.origin then bins by floor((coord - offset) / size).
/// Offsets are taken modulo the cell size.
GridCounts grid_aggregate(std::span<const GeoPoint> points, const GridSpec& spec);

struct MaupRow {
  double cell_size_m = 0.0;
  double offset_dx_m = 0.0;
  double offset_dy_m = 0.0;
  std::size_t n_cells = 0;    // occupied cells
  double mean_density = 0.0;  // per km^2, over occupied cells
  double variance = 0.0;      // population variance of per-cell density
  std::size_t max_cell_count = 0;
  std::size_t total_count = 0;
};

struct MaupScaleSummary {
  double cell_size_m = 0.0;
  double mean_density = 0.0;   // averaged across offsets
  double mean_variance = 0.0;  // averaged across offsets
  // Zoning effect: spread of max_cell_count across offsets.
  std::size_t zoning_range = 0;
};

struct MaupReport {
  std::size_t total_points = 0;
  std::vector<MaupRow> rows;
  std::vector<MaupScaleSummary> scales;
};

MaupRow summarize_grid(const GridCounts& counts, const GridSpec& spec);

/// Every cell size is tried at k offsets (i * size / k on both axes,
/// i = 0..k-1) around `origin` (the point centroid when absent).
MaupReport maup_experiment(std::span<const GeoPoint> points, std::span<const double> cell_sizes,
                           std::size_t offsets_per_size,
                           std::optional<GeoPoint> origin = std::nullopt);

std::string write_maup_csv(const MaupReport& report);
MaupReport read_maup_csv(std::string_view text);

}  // namespace wifimap

#endif  // WIFIMAP_DENSITY_HPP_
