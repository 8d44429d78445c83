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

#include "wifimap/predict.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "wifimap/csv.hpp"
#include "wifimap/error.hpp"
#include "wifimap/parallel.hpp"

namespace wifimap {

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : trim(s)) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

Geotype assign_geotype(double population, double area_km2, const GeotypeThresholds& thresholds) {
  if (!(area_km2 > 0.0) || !std::isfinite(area_km2)) {
    fail(ErrorKind::kInvalidParameter, fmt::format("area must be positive, got {} km2", area_km2));
  }
  if (!(population >= 0.0) || !std::isfinite(population)) {
    fail(ErrorKind::kInvalidParameter, fmt::format("population must be >= 0, got {}", population));
  }
  const double d = population / area_km2;
  if (d > thresholds.urban_per_km2) return Geotype::kUrban;
  if (d > thresholds.suburban_per_km2) return Geotype::kSuburban;
  return Geotype::kRural;
}

const char* to_string(SizeCategory c) {
  constexpr const char* kNames[] = {"micro", "small", "medium", "large", "very_large"};
  return kNames[static_cast<std::size_t>(c)];
}

const char* to_string(Scenario s) {
  constexpr const char* kNames[] = {"low", "baseline", "high"};
  return kNames[static_cast<std::size_t>(s)];
}

std::optional<Scenario> scenario_from_string(std::string_view text) {
  const auto t = lower(text);
  for (auto s : kAllScenarios) {
    if (t == to_string(s)) return s;
  }
  return std::nullopt;
}

// ---- Areas and population ------------------------------------------------

std::vector<StatArea> read_areas_csv(std::string_view text, const GeotypeThresholds& thresholds) {
  const CsvTable table = parse_csv(text);
  const auto c_id = table.require_column("area_id");
  const auto c_region = table.require_column("region");
  const auto c_km2 = table.require_column("area_km2");
  const auto c_pop = table.require_column("population");
  constexpr const char* kCountColumns[] = {"n_micro", "n_small", "n_medium", "n_large",
                                           "n_very_large"};
  PerCategory<std::size_t> c_counts{};
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    c_counts[k] = table.require_column(kCountColumns[k]);
  }
  const auto c_clat = table.column("centroid_lat");
  const auto c_clon = table.column("centroid_lon");
  if (c_clat.has_value() != c_clon.has_value()) {
    fail(ErrorKind::kFormat, "areas CSV needs both centroid_lat and centroid_lon, or neither");
  }

  std::vector<StatArea> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("areas CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    StatArea a;
    a.area_id = std::string(trim(row[c_id]));
    a.region = std::string(trim(row[c_region]));
    const auto km2 = parse_double(row[c_km2]);
    const auto pop = parse_double(row[c_pop]);
    if (a.area_id.empty()) fail(ErrorKind::kFormat, where + ": empty area_id");
    if (!km2 || !std::isfinite(*km2) || !(*km2 > 0.0)) {
      fail(ErrorKind::kFormat, where + ": area_km2 must be positive");
    }
    if (!pop || !std::isfinite(*pop) || *pop < 0.0) {
      fail(ErrorKind::kFormat, where + ": population must be >= 0");
    }
    a.area_km2 = *km2;
    a.population = *pop;
    for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
      const auto n = parse_int(row[c_counts[k]]);
      if (!n || *n < 0) fail(ErrorKind::kFormat, where + ": business counts must be integers >= 0");
      a.business_counts[k] = *n;
    }
    if (c_clat) {
      const auto lat = parse_double(row[*c_clat]);
      const auto lon = parse_double(row[*c_clon]);
      if (!trim(row[*c_clat]).empty() || !trim(row[*c_clon]).empty()) {
        if (!lat || !lon || !is_valid({*lat, *lon})) fail(ErrorKind::kFormat, where + ": bad centroid");
        a.centroid = GeoPoint{*lat, *lon};
      }
    }
    a.geotype = assign_geotype(a.population, a.area_km2, thresholds);
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(),
            [](const StatArea& a, const StatArea& b) { return a.area_id < b.area_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].area_id == out[i - 1].area_id) {
      fail(ErrorKind::kFormat, fmt::format("duplicate area_id '{}'", out[i].area_id));
    }
  }
  return out;
}

std::vector<Individual> read_population_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_person = table.require_column("person_id");
  const auto c_area = table.require_column("area_id");
  const auto c_house = table.require_column("household_id");
  const auto c_age = table.require_column("age");
  std::vector<Individual> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("population CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    Individual p{std::string(trim(row[c_person])), std::string(trim(row[c_area])),
                 std::string(trim(row[c_house])), 0.0};
    const auto age = parse_double(row[c_age]);
    if (p.person_id.empty() || p.area_id.empty() || p.household_id.empty()) {
      fail(ErrorKind::kFormat, where + ": empty id");
    }
    if (!age || !std::isfinite(*age) || *age < 0.0) fail(ErrorKind::kFormat, where + ": bad age");
    p.age = *age;
    out.push_back(std::move(p));
  }
  return out;
}

bool id_less(std::string_view a, std::string_view b) {
  const auto ia = parse_int(a);
  const auto ib = parse_int(b);
  if (ia && ib && *ia != *ib) return *ia < *ib;
  return a < b;
}

std::vector<Household> form_households(std::span<const Individual> individuals) {
  std::vector<std::size_t> order(individuals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = individuals[x];
    const auto& b = individuals[y];
    if (a.area_id != b.area_id) return a.area_id < b.area_id;
    if (a.household_id != b.household_id) return a.household_id < b.household_id;
    return x < y;
  });
  std::vector<Household> out;
  for (std::size_t i = 0; i < order.size();) {
    const auto& first = individuals[order[i]];
    Household h{first.area_id, first.household_id, order[i], 0};
    std::size_t j = i;
    for (; j < order.size(); ++j) {
      const auto& p = individuals[order[j]];
      if (p.area_id != h.area_id || p.household_id != h.household_id) break;
      const auto& head = individuals[h.head];
      if (p.age > head.age || (p.age == head.age && id_less(p.person_id, head.person_id))) {
        h.head = order[j];
      }
    }
    h.members = j - i;
    out.push_back(std::move(h));
    i = j;
  }
  return out;
}

AreaLocator::AreaLocator(std::span<const StatArea> areas) : areas_(areas) {
  std::vector<GeoPoint> centroids;
  centroids.reserve(areas.size());
  for (const auto& a : areas) {
    if (!a.centroid) {
      fail(ErrorKind::kFormat,
           fmt::format("area '{}' has no centroid; nearest-area assignment needs "
                       "centroid_lat/centroid_lon",
                       a.area_id));
    }
    centroids.push_back(*a.centroid);
  }
  index_ = SpatialIndex(centroids, 1000.0);
}

std::optional<std::size_t> AreaLocator::nearest(const GeoPoint& p) const {
  if (areas_.empty()) return std::nullopt;
  // Every centroid at distance <= d* lies inside any radius that returns a
  // hit, so the closest hit is the global nearest.
  std::vector<std::uint32_t> hits;
  for (double r = 500.0; hits.empty(); r *= 4.0) hits = index_.within(p, r);
  std::size_t best = hits.front();
  double best_d = haversine_distance(p, index_.point(best));
  for (auto id : hits) {
    const double d = haversine_distance(p, index_.point(id));
    if (d < best_d || (d == best_d && areas_[id].area_id < areas_[best].area_id)) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

std::optional<std::size_t> nearest_area(const GeoPoint& p, std::span<const StatArea> areas) {
  return AreaLocator(areas).nearest(p);
}

// ---- Adoption probability tables -----------------------------------------

std::optional<AgeBand> parse_age_band(std::string_view label) {
  label = trim(label);
  AgeBand band;
  band.label = std::string(label);
  if (label.ends_with('+')) {
    const auto lo = parse_double(label.substr(0, label.size() - 1));
    if (!lo || !std::isfinite(*lo) || *lo < 0.0) return std::nullopt;
    band.lo = *lo;
    return band;
  }
  const auto dash = label.find('-', 1);
  if (dash == std::string_view::npos) return std::nullopt;
  const auto lo = parse_double(label.substr(0, dash));
  const auto hi = parse_double(label.substr(dash + 1));
  if (!lo || !hi || !std::isfinite(*lo) || !std::isfinite(*hi) || *lo < 0.0 || !(*hi > *lo)) {
    return std::nullopt;
  }
  band.lo = *lo;
  band.hi = *hi;
  return band;
}

std::vector<AgeBand> age_bands_from_edges(std::span<const double> edges) {
  std::vector<AgeBand> bands;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i]) || edges[i] < 0.0 || (i && !(edges[i] > edges[i - 1]))) {
      fail(ErrorKind::kInvalidParameter, "age band edges must be finite, >= 0 and increasing");
    }
    AgeBand b;
    b.lo = edges[i];
    if (i + 1 < edges.size()) {
      b.hi = edges[i + 1];
      b.label = format_exact(b.lo) + "-" + format_exact(b.hi);
    } else {
      b.label = format_exact(b.lo) + "+";
    }
    bands.push_back(std::move(b));
  }
  return bands;
}

namespace {

const char* stage_name(AdoptionStage s) {
  return s == AdoptionStage::kBroadband ? "broadband" : "wifi";
}

}  // namespace

const std::string& AdoptionProbabilityTable::band_for(double age) const {
  for (const auto& b : bands) {
    if (age >= b.lo && age < b.hi) return b.label;
  }
  if (bands.empty()) {
    for (const auto& [label, p] : age_band) {
      const auto b = parse_age_band(label);
      if (b && age >= b->lo && age < b->hi) return label;
    }
  }
  fail(ErrorKind::kTableCoverage,
       fmt::format("{} table has no age band covering age {}", stage_name(stage), age));
}

double AdoptionProbabilityTable::age_probability(std::string_view band) const {
  if (auto it = age_band.find(band); it != age_band.end()) return it->second;
  fail(ErrorKind::kTableCoverage,
       fmt::format("{} table has no age_band key '{}'", stage_name(stage), band));
}

double AdoptionProbabilityTable::region_probability(std::string_view key) const {
  if (auto it = region.find(key); it != region.end()) return it->second;
  fail(ErrorKind::kTableCoverage,
       fmt::format("{} table has no region key '{}'", stage_name(stage), key));
}

double AdoptionProbabilityTable::settlement_probability(Geotype g) const {
  if (auto it = settlement.find(g); it != settlement.end()) return it->second;
  fail(ErrorKind::kTableCoverage,
       fmt::format("{} table has no settlement key '{}'", stage_name(stage), to_string(g)));
}

AdoptionTables read_probability_tables_csv(std::string_view text,
                                           std::span<const double> age_band_edges) {
  const CsvTable table = parse_csv(text);
  const auto c_stage = table.require_column("stage");
  const auto c_dim = table.require_column("dimension");
  const auto c_key = table.require_column("key");
  const auto c_p = table.require_column("probability");
  AdoptionTables tables;
  tables.broadband.stage = AdoptionStage::kBroadband;
  tables.wifi.stage = AdoptionStage::kWifi;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("probability CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    const auto stage = lower(row[c_stage]);
    const auto dim = lower(row[c_dim]);
    const std::string key{trim(row[c_key])};
    const auto p = parse_double(row[c_p]);
    if (!p || !is_probability(*p)) fail(ErrorKind::kFormat, where + ": probability must be in [0,1]");
    AdoptionProbabilityTable* t = nullptr;
    if (stage == "broadband") {
      t = &tables.broadband;
    } else if (stage == "wifi") {
      t = &tables.wifi;
    } else {
      fail(ErrorKind::kFormat, where + ": stage must be broadband or wifi");
    }
    bool inserted = false;
    if (dim == "age_band") {
      if (!parse_age_band(key)) fail(ErrorKind::kFormat, where + ": bad age band '" + key + "'");
      inserted = t->age_band.emplace(key, *p).second;
    } else if (dim == "region") {
      inserted = t->region.emplace(key, *p).second;
    } else if (dim == "settlement") {
      const auto g = geotype_from_string(key);
      if (!g) fail(ErrorKind::kFormat, where + ": settlement must be urban, suburban or rural");
      inserted = t->settlement.emplace(*g, *p).second;
    } else {
      fail(ErrorKind::kFormat, where + ": dimension must be age_band, region or settlement");
    }
    if (!inserted) fail(ErrorKind::kFormat, where + ": duplicate key '" + key + "'");
  }

  for (auto* t : {&tables.broadband, &tables.wifi}) {
    if (!age_band_edges.empty()) {
      t->bands = age_bands_from_edges(age_band_edges);
      for (const auto& b : t->bands) t->age_probability(b.label);
    } else {
      for (const auto& [label, p] : t->age_band) t->bands.push_back(*parse_age_band(label));
    }
    std::sort(t->bands.begin(), t->bands.end(),
              [](const AgeBand& a, const AgeBand& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < t->bands.size(); ++i) {
      if (t->bands[i].lo < t->bands[i - 1].hi) {
        fail(ErrorKind::kFormat, fmt::format("{} age bands '{}' and '{}' overlap", stage_name(t->stage),
                                             t->bands[i - 1].label, t->bands[i].label));
      }
    }
  }
  return tables;
}

double household_prob(const AdoptionProbabilityTable& table, std::string_view head_age_band,
                      std::string_view region, Geotype geotype) {
  const double a = table.age_probability(head_age_band);
  const double r = table.region_probability(region);
  const double s = table.settlement_probability(geotype);
  return (a + r + s) / 3.0;
}

// ---- Residential microsimulation -----------------------------------------

AdoptionDraw draw_adoption(const KeyedStream& stream, double p_broadband, double p_wifi) {
  AdoptionDraw d;
  d.r_broadband = stream.uniform(0);
  if (d.r_broadband < p_broadband) {
    d.a_broadband = 1;
    d.r_wifi = stream.uniform(1);
    d.a_wifi = *d.r_wifi < p_wifi ? 1 : 0;
  }
  return d;
}

std::vector<HouseholdOutcome> simulate_households(std::span<const StatArea> areas,
                                                  std::span<const Individual> individuals,
                                                  const AdoptionTables& tables, std::uint64_t seed,
                                                  unsigned threads) {
  const auto households = form_households(individuals);
  std::map<std::string_view, std::size_t> area_index;
  for (std::size_t i = 0; i < areas.size(); ++i) area_index.emplace(areas[i].area_id, i);

  std::vector<HouseholdOutcome> out(households.size());
  parallel_for(households.size(), threads, [&](std::size_t i) {
    const Household& h = households[i];
    auto it = area_index.find(h.area_id);
    if (it == area_index.end()) {
      fail(ErrorKind::kFormat, fmt::format("household '{}' refers to unknown area '{}'",
                                           h.household_id, h.area_id));
    }
    const StatArea& area = areas[it->second];
    const double age = individuals[h.head].age;
    HouseholdOutcome& o = out[i];
    o.area = it->second;
    o.household_id = h.household_id;
    try {
      o.p_broadband = household_prob(tables.broadband, tables.broadband.band_for(age), area.region,
                                     area.geotype);
      o.p_wifi = household_prob(tables.wifi, tables.wifi.band_for(age), area.region, area.geotype);
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("area '{}' household '{}': {}", area.area_id,
                                        h.household_id, e.what()));
    }
    o.draw = draw_adoption(KeyedStream(seed, {area.area_id, h.household_id}), o.p_broadband,
                           o.p_wifi);
  });
  return out;
}

std::vector<std::int64_t> simulate_residential(std::span<const StatArea> areas,
                                               std::span<const Individual> individuals,
                                               const AdoptionTables& tables, std::uint64_t seed,
                                               unsigned threads) {
  std::vector<std::int64_t> aps(areas.size(), 0);
  for (const auto& o : simulate_households(areas, individuals, tables, seed, threads)) {
    aps[o.area] += o.draw.a_wifi;
  }
  return aps;
}

// ---- Business floor-area model -------------------------------------------

__extension__ using Wide = __int128;

PerCategory<double> business_floor_area(const StatArea& area, double total_nonres_floor_area_m2) {
  if (!std::isfinite(total_nonres_floor_area_m2) || total_nonres_floor_area_m2 < 0.0) {
    fail(ErrorKind::kInvalidParameter, "total floor area must be finite and >= 0");
  }
  PerCategory<double> out{};
  const auto units = static_cast<std::int64_t>(std::llround(total_nonres_floor_area_m2 / kFloorAreaQuantumM2));
  if (units == 0) return out;

  PerCategory<std::int64_t> weight{};
  std::int64_t weight_sum = 0;
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    weight[k] = area.business_counts[k] * employees(kAllSizeCategories[k]);
    weight_sum += weight[k];
  }
  if (weight_sum == 0) {
    fail(ErrorKind::kDisaggregation,
         fmt::format("area '{}' has {} m2 of business floor area but no businesses to weight it",
                     area.area_id, total_nonres_floor_area_m2));
  }
  PerCategory<std::int64_t> share{};
  PerCategory<std::int64_t> remainder{};
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    const Wide num = static_cast<Wide>(units) * weight[k];
    share[k] = static_cast<std::int64_t>(num / weight_sum);
    remainder[k] = static_cast<std::int64_t>(num % weight_sum);
    assigned += share[k];
  }
  std::array<std::size_t, kNumSizeCategories> order{0, 1, 2, 3, 4};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < units; ++i, ++assigned) ++share[order[i]];
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    out[k] = static_cast<double>(share[k]) * kFloorAreaQuantumM2;
  }
  return out;
}

PerCategory<double> calibrate_business_adoption(std::span<const StatArea> areas,
                                                double national_target,
                                                const PerCategory<double>& multipliers) {
  if (!is_probability(national_target)) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("national adoption target must be in [0,1], got {}", national_target));
  }
  for (double m : multipliers) {
    if (!std::isfinite(m) || m < 0.0) {
      fail(ErrorKind::kInvalidParameter, "size multipliers must be finite and >= 0");
    }
  }
  PerCategory<double> count{};
  double total = 0.0;
  for (const auto& a : areas) {
    for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
      count[k] += static_cast<double>(a.business_counts[k]);
      total += static_cast<double>(a.business_counts[k]);
    }
  }
  PerCategory<double> p{};
  if (total == 0.0) {
    for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
      p[k] = std::min(1.0, national_target * multipliers[k]);
    }
    return p;
  }
  if (national_target == 0.0) return p;

  double achievable = 0.0;
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    if (multipliers[k] > 0.0) achievable += count[k];
  }
  achievable /= total;
  if (national_target > achievable + 1e-12) {
    fail(ErrorKind::kCalibration,
         fmt::format("national target {} is unreachable; achievable range is [0, {}]",
                     national_target, achievable));
  }

  // Solve sum_k count_k * min(1, s * m_k) = target * total. Categories are
  // pinned at 1 as soon as the free solution pushes them past it; the pinned
  // set only grows, so this settles in at most five passes.
  std::array<bool, kNumSizeCategories> pinned{};
  double s = 0.0;
  for (std::size_t pass = 0; pass <= kNumSizeCategories; ++pass) {
    double need = national_target * total;
    double free_mass = 0.0;
    for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
      if (pinned[k]) {
        need -= count[k];
      } else {
        free_mass += count[k] * multipliers[k];
      }
    }
    s = free_mass > 0.0 ? std::max(0.0, need) / free_mass : 0.0;
    bool changed = false;
    for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
      if (!pinned[k] && count[k] > 0.0 && s * multipliers[k] > 1.0) {
        pinned[k] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    p[k] = pinned[k] ? 1.0 : std::min(1.0, s * multipliers[k]);
  }
  return p;
}

std::int64_t aps_for_floor_area(double adopted_floor_area_m2, double coverage_m2) {
  if (!(coverage_m2 > 0.0) || !std::isfinite(coverage_m2)) {
    fail(ErrorKind::kInvalidParameter, "AP coverage area must be positive");
  }
  if (!(adopted_floor_area_m2 > 0.0)) return 0;
  const double x = adopted_floor_area_m2 / coverage_m2;
  double c = std::ceil(x);
  if (c - x > 1.0 - 1e-9) c -= 1.0;
  return static_cast<std::int64_t>(c);
}

std::int64_t predict_business_aps(const StatArea& area, const PerCategory<double>& floor_areas,
                                  const PerCategory<double>& adoption, Scenario scenario,
                                  const BusinessModelOptions& options) {
  if (!is_probability(options.coverage_fraction)) {
    fail(ErrorKind::kInvalidParameter, "coverage fraction must be in [0,1]");
  }
  double adopted = 0.0;
  for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
    if (options.mode == BusinessMode::kExpectation) {
      adopted += floor_areas[k] * adoption[k];
      continue;
    }
    const std::int64_t n = area.business_counts[k];
    if (n == 0) continue;
    const KeyedStream stream(options.seed, {"business", area.area_id, to_string(kAllSizeCategories[k])});
    std::int64_t adopters = 0;
    for (std::int64_t b = 0; b < n; ++b) {
      if (stream.uniform(static_cast<std::uint64_t>(b)) < adoption[k]) ++adopters;
    }
    adopted += floor_areas[k] * static_cast<double>(adopters) / static_cast<double>(n);
  }
  return aps_for_floor_area(adopted * options.coverage_fraction, coverage_area_m2(scenario));
}

// ---- Whole model ---------------------------------------------------------

std::vector<double> business_floor_totals(std::span<const StatArea> areas,
                                          std::span<const Premise> premises) {
  std::vector<double> totals(areas.size(), 0.0);
  const bool any_business = std::any_of(premises.begin(), premises.end(), [](const Premise& p) {
    return p.use == PremiseUse::kBusiness;
  });
  if (!any_business || areas.empty()) return totals;
  const AreaLocator locator(areas);
  for (const auto& p : premises) {
    if (p.use != PremiseUse::kBusiness) continue;
    totals[*locator.nearest(p.location)] += p.floor_area_m2;
  }
  return totals;
}

std::vector<PredictedArea> predict_all(const PredictInputs& inputs, const PredictOptions& options) {
  if (!inputs.tables) fail(ErrorKind::kInvalidParameter, "adoption tables are required");
  std::vector<StatArea> areas(inputs.areas.begin(), inputs.areas.end());
  std::sort(areas.begin(), areas.end(),
            [](const StatArea& a, const StatArea& b) { return a.area_id < b.area_id; });
  for (std::size_t i = 1; i < areas.size(); ++i) {
    if (areas[i - 1].area_id == areas[i].area_id) {
      fail(ErrorKind::kInvalidParameter, fmt::format("duplicate area_id '{}'", areas[i].area_id));
    }
  }
  const auto residential =
      simulate_residential(areas, inputs.individuals, *inputs.tables, options.seed, options.threads);
  const auto floor_totals = business_floor_totals(areas, inputs.premises);
  const auto adoption = calibrate_business_adoption(areas, options.national_business_adoption_target,
                                                    options.size_multipliers);
  const BusinessModelOptions business{options.business_mode, options.coverage_fraction, options.seed};

  std::vector<PredictedArea> out(areas.size());
  parallel_for(areas.size(), options.threads, [&](std::size_t i) {
    const StatArea& a = areas[i];
    PredictedArea& p = out[i];
    p.area_id = a.area_id;
    p.geotype = a.geotype;
    p.area_km2 = a.area_km2;
    p.residential_aps = residential[i];
    const auto floors = business_floor_area(a, floor_totals[i]);
    for (auto s : kAllScenarios) {
      p.business_aps_by_scenario[static_cast<std::size_t>(s)] =
          predict_business_aps(a, floors, adoption, s, business);
    }
    p.scenario = options.scenario;
    p.predicted_density_per_km2 = p.density(options.scenario);
  });
  return out;
}

std::vector<PredictionRow> prediction_rows(std::span<const PredictedArea> predicted,
                                           std::span<const Scenario> scenarios, std::uint64_t seed) {
  std::vector<PredictionRow> rows;
  rows.reserve(predicted.size() * scenarios.size());
  for (const auto& p : predicted) {
    for (auto s : scenarios) {
      const auto business = p.business_aps(s);
      rows.push_back({p.area_id, p.geotype, p.residential_aps, business, p.residential_aps + business,
                      p.density(s), s, seed});
    }
  }
  return rows;
}

std::string write_predicted_csv(std::span<const PredictionRow> rows) {
  CsvWriter w{"area_id", "geotype", "residential_aps", "business_aps", "total_aps",
              "predicted_density_per_km2", "scenario", "seed"};
  for (const auto& r : rows) {
    w.row({r.area_id, to_string(r.geotype), std::to_string(r.residential_aps),
           std::to_string(r.business_aps), std::to_string(r.total_aps),
           format_fixed(r.predicted_density_per_km2), to_string(r.scenario), std::to_string(r.seed)});
  }
  return w.str();
}

std::vector<PredictionRow> read_predicted_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_id = table.require_column("area_id");
  const auto c_geo = table.require_column("geotype");
  const auto c_res = table.require_column("residential_aps");
  const auto c_bus = table.require_column("business_aps");
  const auto c_tot = table.require_column("total_aps");
  const auto c_den = table.require_column("predicted_density_per_km2");
  const auto c_sc = table.require_column("scenario");
  const auto c_seed = table.require_column("seed");
  std::vector<PredictionRow> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("predicted CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) fail(ErrorKind::kFormat, where + ": wrong field count");
    const auto geo = geotype_from_string(row[c_geo]);
    const auto res = parse_int(row[c_res]);
    const auto bus = parse_int(row[c_bus]);
    const auto tot = parse_int(row[c_tot]);
    const auto den = parse_double(row[c_den]);
    const auto sc = scenario_from_string(row[c_sc]);
    const auto seed = parse_int(row[c_seed]);
    if (trim(row[c_id]).empty() || !geo || !res || !bus || !tot || !den || !sc || !seed ||
        *res < 0 || *bus < 0 || *tot != *res + *bus || !(*den >= 0.0)) {
      fail(ErrorKind::kFormat, where + ": invalid record");
    }
    out.push_back({std::string(trim(row[c_id])), *geo, *res, *bus, *tot, *den, *sc,
                   static_cast<std::uint64_t>(*seed)});
  }
  return out;
}

}  // namespace wifimap
