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

#ifndef WIFIMAP_PREDICT_HPP_
#define WIFIMAP_PREDICT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wifimap/density.hpp"
#include "wifimap/geo.hpp"
#include "wifimap/geotype.hpp"
#include "wifimap/rng.hpp"

namespace wifimap {

// ---- Settlement classification -------------------------------------------

struct GeotypeThresholds {
  double urban_per_km2 = 7959.0;
  double suburban_per_km2 = 782.0;
};

/// density > urban -> URBAN; > suburban -> SUBURBAN; otherwise RURAL.
Geotype assign_geotype(double population, double area_km2,
                       const GeotypeThresholds& thresholds = {});

// ---- Business size categories --------------------------------------------

enum class SizeCategory { kMicro, kSmall, kMedium, kLarge, kVeryLarge };

inline constexpr std::size_t kNumSizeCategories = 5;
inline constexpr std::array<SizeCategory, kNumSizeCategories> kAllSizeCategories = {
    SizeCategory::kMicro, SizeCategory::kSmall, SizeCategory::kMedium, SizeCategory::kLarge,
    SizeCategory::kVeryLarge};

template <typename T>
using PerCategory = std::array<T, kNumSizeCategories>;

/// Representative head count: 5, 25, 150, 350, 750.
constexpr int employees(SizeCategory c) {
  constexpr int kEmployees[] = {5, 25, 150, 350, 750};
  return kEmployees[static_cast<std::size_t>(c)];
}

const char* to_string(SizeCategory c);

// ---- AP coverage scenarios -----------------------------------------------

enum class Scenario { kLow, kBaseline, kHigh };

inline constexpr std::array<Scenario, 3> kAllScenarios = {Scenario::kLow, Scenario::kBaseline,
                                                          Scenario::kHigh};

/// Floor area served by one AP, in m^2: 100 / 200 / 300.
constexpr double coverage_area_m2(Scenario s) {
  constexpr double kArea[] = {100.0, 200.0, 300.0};
  return kArea[static_cast<std::size_t>(s)];
}

const char* to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view text);

// ---- Areas and population ------------------------------------------------

struct StatArea {
  std::string area_id;
  std::string region;
  double area_km2 = 0.0;
  double population = 0.0;
  Geotype geotype = Geotype::kRural;
  PerCategory<std::int64_t> business_counts{};
  std::optional<GeoPoint> centroid;
};

/// Columns area_id,region,area_km2,population,n_micro,n_small,n_medium,
/// n_large,n_very_large and optionally centroid_lat,centroid_lon. Sorted by
/// area_id; duplicate ids are a format error.
std::vector<StatArea> read_areas_csv(std::string_view text,
                                     const GeotypeThresholds& thresholds = {});

struct Individual {
  std::string person_id;
  std::string area_id;
  std::string household_id;
  double age = 0.0;
};

std::vector<Individual> read_population_csv(std::string_view text);

struct Household {
  std::string area_id;
  std::string household_id;
  std::size_t head = 0;  // index into the individuals span
  std::size_t members = 0;
};

/// Groups by (area_id, household_id), ordered by that key. The head is the
/// oldest member; equal ages go to the smallest person_id.
std::vector<Household> form_households(std::span<const Individual> individuals);

/// Numeric comparison when both ids are integers, otherwise lexicographic.
bool id_less(std::string_view a, std::string_view b);

/// Index of the area whose centroid is nearest (smallest area_id on ties).
/// kFormat if any area lacks a centroid; nullopt only when `areas` is empty.
std::optional<std::size_t> nearest_area(const GeoPoint& p, std::span<const StatArea> areas);

// Reusable nearest-centroid lookup over a fixed area list.
class AreaLocator {
 public:
  explicit AreaLocator(std::span<const StatArea> areas);
  std::optional<std::size_t> nearest(const GeoPoint& p) const;

 private:
  std::span<const StatArea> areas_;
  SpatialIndex index_;
};

// ---- Adoption probability tables -----------------------------------------

enum class AdoptionStage { kBroadband, kWifi };

/// Half-open age interval [lo, hi). Label "lo-hi", or "lo+" when unbounded.
struct AgeBand {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  std::string label;
};

std::optional<AgeBand> parse_age_band(std::string_view label);
std::vector<AgeBand> age_bands_from_edges(std::span<const double> edges);

struct AdoptionProbabilityTable {
  AdoptionStage stage = AdoptionStage::kBroadband;
  std::map<std::string, double, std::less<>> age_band;
  std::map<std::string, double, std::less<>> region;
  std::map<Geotype, double> settlement;
  std::vector<AgeBand> bands;  // sorted by lo; empty means parse the age_band keys

  /// Label of the band holding `age`; kTableCoverage when none does.
  const std::string& band_for(double age) const;
  double age_probability(std::string_view band) const;
  double region_probability(std::string_view region) const;
  double settlement_probability(Geotype g) const;
};

struct AdoptionTables {
  AdoptionProbabilityTable broadband;
  AdoptionProbabilityTable wifi;
};

/// Columns stage,dimension,key,probability. When `age_band_edges` is
/// non-empty the bands come from the edges and each table must carry all
/// of their labels; otherwise bands are the table's own age_band keys.
AdoptionTables read_probability_tables_csv(std::string_view text,
                                           std::span<const double> age_band_edges = {});

/// (A + R + S) / 3 for the household head's age band, region and geotype.
double household_prob(const AdoptionProbabilityTable& table, std::string_view head_age_band,
                      std::string_view region, Geotype geotype);

// ---- Residential microsimulation -----------------------------------------

struct AdoptionDraw {
  double r_broadband = 0.0;
  std::optional<double> r_wifi;  // only drawn for broadband adopters
  int a_broadband = 0;
  int a_wifi = 0;
};

/// Broadband when r1 < p_b; then Wi-Fi when r2 < p_w. Draws 0 and 1 of the
/// stream supply r1 and r2.
AdoptionDraw draw_adoption(const KeyedStream& stream, double p_broadband, double p_wifi);

struct HouseholdOutcome {
  std::size_t area = 0;  // index into the areas span
  std::string household_id;
  double p_broadband = 0.0;
  double p_wifi = 0.0;
  AdoptionDraw draw;
};

/// One outcome per household, ordered by (area_id, household_id). The
/// stream for a household is keyed by (seed, area_id, household_id).
std::vector<HouseholdOutcome> simulate_households(std::span<const StatArea> areas,
                                                  std::span<const Individual> individuals,
                                                  const AdoptionTables& tables,
                                                  std::uint64_t seed, unsigned threads = 1);

/// Wi-Fi adopting households per area (one AP each), aligned with `areas`.
std::vector<std::int64_t> simulate_residential(std::span<const StatArea> areas,
                                               std::span<const Individual> individuals,
                                               const AdoptionTables& tables, std::uint64_t seed,
                                               unsigned threads = 1);

// ---- Business floor-area model -------------------------------------------

/// Splits the area's non-residential floor area over size categories with
/// weights count * employees. Shares are reconciled by largest remainder on
/// a 0.001 m^2 grid so they sum to the (quantized) total exactly.
PerCategory<double> business_floor_area(const StatArea& area, double total_nonres_floor_area_m2);

inline constexpr double kFloorAreaQuantumM2 = 0.001;

/// Per-category adoption probabilities min(1, s * multiplier) with s chosen
/// so the business-count-weighted national mean equals `national_target`.
/// kCalibration when the target is above the achievable maximum.
PerCategory<double> calibrate_business_adoption(
    std::span<const StatArea> areas, double national_target,
    const PerCategory<double>& multipliers = {1.0, 1.0, 1.0, 1.0, 1.0});

enum class BusinessMode { kExpectation, kDraw };

struct BusinessModelOptions {
  BusinessMode mode = BusinessMode::kExpectation;
  double coverage_fraction = 1.0;  // share of adopted floor area with APs
  std::uint64_t seed = 0;
};

/// ceil(adopted / coverage), ignoring floating noise below 1e-9 of an AP.
std::int64_t aps_for_floor_area(double adopted_floor_area_m2, double coverage_m2);

std::int64_t predict_business_aps(const StatArea& area, const PerCategory<double>& floor_areas,
                                  const PerCategory<double>& adoption, Scenario scenario,
                                  const BusinessModelOptions& options = {});

// ---- Whole model ---------------------------------------------------------

struct PredictInputs {
  std::span<const StatArea> areas;
  std::span<const Individual> individuals;
  std::span<const Premise> premises;  // BUSINESS premises feed floor area
  const AdoptionTables* tables = nullptr;
};

struct PredictOptions {
  Scenario scenario = Scenario::kBaseline;
  std::uint64_t seed = 0;
  double national_business_adoption_target = 0.9;
  PerCategory<double> size_multipliers{1.0, 1.0, 1.0, 1.0, 1.0};
  BusinessMode business_mode = BusinessMode::kExpectation;
  double coverage_fraction = 1.0;
  unsigned threads = 1;
};

struct PredictedArea {
  std::string area_id;
  Geotype geotype = Geotype::kRural;
  double area_km2 = 0.0;
  std::int64_t residential_aps = 0;
  std::array<std::int64_t, 3> business_aps_by_scenario{};
  Scenario scenario = Scenario::kBaseline;
  double predicted_density_per_km2 = 0.0;  // for `scenario`

  std::int64_t business_aps(Scenario s) const {
    return business_aps_by_scenario[static_cast<std::size_t>(s)];
  }
  double density(Scenario s) const {
    return static_cast<double>(residential_aps + business_aps(s)) / area_km2;
  }
};

/// Non-residential floor area per area from nearest-centroid assignment of
/// BUSINESS premises, aligned with `areas`.
std::vector<double> business_floor_totals(std::span<const StatArea> areas,
                                          std::span<const Premise> premises);

/// One entry per area, ordered by area_id.
std::vector<PredictedArea> predict_all(const PredictInputs& inputs, const PredictOptions& options);

/// One row of the predicted CSV.
struct PredictionRow {
  std::string area_id;
  Geotype geotype = Geotype::kRural;
  std::int64_t residential_aps = 0;
  std::int64_t business_aps = 0;
  std::int64_t total_aps = 0;
  double predicted_density_per_km2 = 0.0;
  Scenario scenario = Scenario::kBaseline;
  std::uint64_t seed = 0;
};

std::vector<PredictionRow> prediction_rows(std::span<const PredictedArea> predicted,
                                           std::span<const Scenario> scenarios, std::uint64_t seed);
std::string write_predicted_csv(std::span<const PredictionRow> rows);
std::vector<PredictionRow> read_predicted_csv(std::string_view text);

}  // namespace wifimap

#endif  // WIFIMAP_PREDICT_HPP_
