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

#ifndef WIFIMAP_COMPARE_HPP_
#define WIFIMAP_COMPARE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wifimap/density.hpp"
#include "wifimap/ingest.hpp"
#include "wifimap/predict.hpp"

namespace wifimap {

/// bssid -> area_id by nearest area centroid.
std::map<std::string, std::string, std::less<>> assign_aps_to_areas(std::span<const ApRecord> aps,
                                                                    std::span<const StatArea> areas);

/// bssid -> geotype of its assigned area.
std::map<std::string, Geotype, std::less<>> geotypes_by_bssid(std::span<const ApRecord> aps,
                                                              std::span<const StatArea> areas);

// Observed-above-predicted test applied at one buffer radius.
struct InflationRule {
  double radius_m = 100.0;
  double threshold = 0.10;
};

struct ComparisonRow {
  std::string area_id;
  Geotype geotype = Geotype::kRural;
  double radius_m = 0.0;
  Scenario scenario = Scenario::kBaseline;
  std::size_t n_aps = 0;
  double observed_mean_density = 0.0;
  double predicted_density = 0.0;
  std::optional<double> ratio;  // absent when predicted is zero
  bool no_observations = false;
  bool predicted_zero = false;
  bool density_inflation = false;
};

/// One row per (predicted row, radius). The observed value is the mean
/// ap_density_per_km2 over the records of APs assigned to that area.
/// Sorted by (geotype, radius, area_id, scenario).
std::vector<ComparisonRow> join_observed_predicted(
    std::span<const DensityRecord> records,
    const std::map<std::string, std::string, std::less<>>& ap_area,
    std::span<const PredictionRow> predicted, std::span<const double> radii,
    const InflationRule& rule = {});

std::string write_comparison_csv(std::span<const ComparisonRow> rows);
std::vector<ComparisonRow> read_comparison_csv(std::string_view text);

struct Building {
  std::string building_id;
  std::int64_t actual_ap_count = 0;
  double floor_area_m2 = 0.0;
};

std::vector<Building> read_buildings_csv(std::string_view text);

struct ValidationRow {
  std::string building_id;
  std::int64_t actual_ap_count = 0;
  double floor_area_m2 = 0.0;
  std::int64_t predicted_ap_count = 0;
  std::size_t rank = 0;  // 1 = most APs
};

struct ValidationSummary {
  std::size_t n = 0;
  std::optional<double> spearman;  // absent for n < 2 or a constant series
  double mean_absolute_error = 0.0;
};

struct ValidationResult {
  std::vector<ValidationRow> rows;  // ordered by rank
  ValidationSummary summary;
  std::vector<std::string> warnings;
};

/// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

ValidationSummary summarize_validation(std::span<const ValidationRow> rows);

/// predicted = ceil(floor_area / coverage). Rows with non-positive floor
/// area are dropped with a warning. Ranked by actual count descending,
/// ties by building_id.
ValidationResult validate_buildings(std::span<const Building> buildings, double coverage_m2);

std::string write_validation_csv(std::span<const ValidationRow> rows);
std::vector<ValidationRow> read_validation_csv(std::string_view text);

}  // namespace wifimap

#endif  // WIFIMAP_COMPARE_HPP_
