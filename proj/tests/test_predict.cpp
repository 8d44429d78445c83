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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "wifimap/error.hpp"
#include "wifimap/predict.hpp"
#include "wifimap/rng.hpp"

using namespace wifimap;

namespace {

AdoptionProbabilityTable constant_table(AdoptionStage stage, double p,
                                        std::initializer_list<std::string> regions = {"r"}) {
  AdoptionProbabilityTable t;
  t.stage = stage;
  t.age_band["0+"] = p;
  for (const auto& r : regions) t.region[r] = p;
  for (auto g : kAllGeotypes) t.settlement[g] = p;
  return t;
}

AdoptionTables constant_tables(double pb, double pw) {
  return {constant_table(AdoptionStage::kBroadband, pb), constant_table(AdoptionStage::kWifi, pw)};
}

StatArea area(std::string id, double km2, double pop, PerCategory<std::int64_t> businesses = {}) {
  StatArea a;
  a.area_id = std::move(id);
  a.region = "r";
  a.area_km2 = km2;
  a.population = pop;
  a.geotype = assign_geotype(pop, km2);
  a.business_counts = businesses;
  return a;
}

// One single-person household per person, spread over the given areas.
std::vector<Individual> singles(const std::vector<StatArea>& areas, std::size_t per_area) {
  std::vector<Individual> out;
  for (const auto& a : areas) {
    for (std::size_t i = 0; i < per_area; ++i) {
      out.push_back({a.area_id + "-p" + std::to_string(i), a.area_id, "h" + std::to_string(i), 40.0});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("geotype thresholds") {
  CHECK(assign_geotype(10'000, 1) == Geotype::kUrban);
  CHECK(assign_geotype(5'000, 1) == Geotype::kSuburban);
  CHECK(assign_geotype(500, 1) == Geotype::kRural);
  CHECK(assign_geotype(782, 1) == Geotype::kRural);
  CHECK(assign_geotype(7959, 1) == Geotype::kSuburban);
  CHECK(assign_geotype(7960, 1) == Geotype::kUrban);
  CHECK(assign_geotype(0, 3) == Geotype::kRural);
  try {
    assign_geotype(100, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidParameter);
  }
}

TEST_CASE("household probability is the mean of the three factors") {
  AdoptionProbabilityTable t;
  t.age_band["18-65"] = 0.9;
  t.region["north"] = 0.6;
  t.settlement[Geotype::kUrban] = 0.3;
  CHECK(household_prob(t, "18-65", "north", Geotype::kUrban) == doctest::Approx(0.6).epsilon(1e-15));
  const auto equal = constant_table(AdoptionStage::kWifi, 0.6);
  CHECK(household_prob(equal, "0+", "r", Geotype::kRural) == doctest::Approx(0.6).epsilon(1e-15));
  const auto one = constant_table(AdoptionStage::kWifi, 1.0);
  CHECK(household_prob(one, "0+", "r", Geotype::kRural) == 1.0);
}

TEST_CASE("missing table keys are coverage errors naming the key") {
  const auto t = constant_table(AdoptionStage::kBroadband, 0.5);
  try {
    household_prob(t, "0+", "atlantis", Geotype::kUrban);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTableCoverage);
    CHECK(std::string(e.what()).find("atlantis") != std::string::npos);
  }
}

TEST_CASE("probability tables CSV and age bands") {
  const auto tables = read_probability_tables_csv(
      "stage,dimension,key,probability\n"
      "broadband,age_band,18-40,0.9\nbroadband,age_band,40+,0.7\n"
      "broadband,region,r,0.8\nbroadband,settlement,urban,0.9\n"
      "broadband,settlement,suburban,0.8\nbroadband,settlement,rural,0.6\n"
      "wifi,age_band,18-40,0.95\nwifi,age_band,40+,0.85\nwifi,region,r,0.9\n"
      "wifi,settlement,urban,0.9\nwifi,settlement,suburban,0.9\nwifi,settlement,rural,0.8\n");
  CHECK(tables.broadband.band_for(39.9) == "18-40");
  CHECK(tables.broadband.band_for(40) == "40+");
  CHECK_THROWS_AS(tables.broadband.band_for(10), Error);
  CHECK(tables.wifi.settlement_probability(Geotype::kRural) == 0.8);
  const auto b = parse_age_band("25-35");
  REQUIRE(b);
  CHECK(b->lo == 25);
  CHECK(b->hi == 35);
  CHECK_FALSE(parse_age_band("old"));
}

TEST_CASE("households: head is the oldest member") {
  const std::vector<Individual> people{{"3", "A", "h1", 30}, {"1", "A", "h1", 60},
                                       {"2", "A", "h1", 60}, {"4", "B", "h1", 20}};
  const auto hh = form_households(people);
  REQUIRE(hh.size() == 2);
  CHECK(hh[0].area_id == "A");
  CHECK(hh[0].members == 3);
  CHECK(people[hh[0].head].person_id == "1");
  CHECK(id_less("9", "10"));
  CHECK(id_less("a10", "a9"));
}

TEST_CASE("draws: adoption when r < p and wifi only after broadband") {
  const KeyedStream s(1, {"A", "h1"});
  const auto never = draw_adoption(s, 0.0, 1.0);
  CHECK(never.a_broadband == 0);
  CHECK(never.a_wifi == 0);
  CHECK_FALSE(never.r_wifi);
  const auto always = draw_adoption(s, 1.0, 1.0);
  CHECK(always.a_broadband == 1);
  CHECK(always.a_wifi == 1);
  CHECK(always.r_broadband == never.r_broadband);
  CHECK(s.uniform(0) == KeyedStream(1, {"A", "h1"}).uniform(0));
  CHECK(s.uniform(0) != KeyedStream(2, {"A", "h1"}).uniform(0));
}

TEST_CASE("degenerate adoption probabilities") {
  const std::vector<StatArea> areas{area("A", 1, 100), area("B", 2, 50)};
  const auto people = singles(areas, 40);
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const auto zero = simulate_residential(areas, people, constant_tables(0, 1), seed);
    CHECK(zero == std::vector<std::int64_t>{0, 0});
    const auto full = simulate_residential(areas, people, constant_tables(1, 1), seed);
    CHECK(full == std::vector<std::int64_t>{40, 40});
  }
}

TEST_CASE("adopter count follows the binomial expectation") {
  std::vector<StatArea> areas;
  for (int i = 0; i < 10; ++i) areas.push_back(area("A" + std::to_string(i), 1, 1000));
  const auto people = singles(areas, 10'000);
  const auto tables = constant_tables(0.8, 0.9);
  const double sigma = std::sqrt(100'000 * 0.72 * 0.28);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto per_area = simulate_residential(areas, people, tables, seed);
    const auto total = std::accumulate(per_area.begin(), per_area.end(), std::int64_t{0});
    CHECK(std::abs(static_cast<double>(total) - 72'000.0) <= 3 * sigma);
  }
}

TEST_CASE("residential simulation is independent of thread count and input order") {
  std::vector<StatArea> areas{area("A", 1, 100), area("B", 1, 100)};
  auto people = singles(areas, 500);
  const auto tables = constant_tables(0.7, 0.6);
  const auto base = simulate_residential(areas, people, tables, 5, 1);
  CHECK(simulate_residential(areas, people, tables, 5, 8) == base);
  std::mt19937_64 rng(2);
  std::shuffle(people.begin(), people.end(), rng);
  CHECK(simulate_residential(areas, people, tables, 5, 3) == base);
}

TEST_CASE("floor area split by employee weights") {
  StatArea micro = area("A", 1, 10, {3, 0, 0, 0, 0});
  const auto only = business_floor_area(micro, 1234.5);
  CHECK(only[0] == doctest::Approx(1234.5));
  for (std::size_t k = 1; k < kNumSizeCategories; ++k) CHECK(only[k] == 0.0);

  StatArea two = area("B", 1, 10, {1, 1, 0, 0, 0});
  const auto split = business_floor_area(two, 3000);
  CHECK(split[0] == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(split[1] == doctest::Approx(2500.0).epsilon(1e-12));

  StatArea none = area("C", 1, 10);
  try {
    business_floor_area(none, 10);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDisaggregation);
  }
  CHECK(business_floor_area(none, 0)[0] == 0.0);
}

TEST_CASE("floor area split conserves the total") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::int64_t> n(0, 9);
  std::uniform_real_distribution<double> f(1, 50'000);
  for (int i = 0; i < 200; ++i) {
    StatArea a = area("A", 1, 1, {1 + n(rng), n(rng), n(rng), n(rng), n(rng)});
    const double total = std::round(f(rng) * 1000) / 1000;
    const auto parts = business_floor_area(a, total);
    std::int64_t units = 0;
    for (double p : parts) units += std::llround(p * 1000);
    CHECK(units == std::llround(total * 1000));
  }
}

TEST_CASE("calibration hits the national target") {
  const std::vector<StatArea> areas{area("A", 1, 1, {50, 20, 5, 2, 1}), area("B", 1, 1, {30, 10, 3, 0, 1})};
  const auto flat = calibrate_business_adoption(areas, 0.9);
  for (double p : flat) CHECK(p == doctest::Approx(0.9).epsilon(1e-12));
  for (double p : calibrate_business_adoption(areas, 0)) CHECK(p == 0.0);

  const PerCategory<double> mult{0.8, 1.0, 1.2, 1.4, 1.6};
  const PerCategory<double> counts{80, 30, 8, 2, 2};
  for (double target : {0.3, 0.75, 0.9}) {
    const auto p = calibrate_business_adoption(areas, target, mult);
    double mean = 0;
    for (std::size_t k = 0; k < kNumSizeCategories; ++k) {
      CHECK(p[k] >= 0.0);
      CHECK(p[k] <= 1.0);
      mean += p[k] * counts[k];
    }
    CHECK(mean / 122.0 == doctest::Approx(target).epsilon(1e-9));
  }
  try {
    calibrate_business_adoption(areas, 0.9, {0.0, 0.0, 0.0, 0.0, 1.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCalibration);
  }
}

TEST_CASE("business APs from adopted floor area") {
  CHECK(aps_for_floor_area(1000, coverage_area_m2(Scenario::kBaseline)) == 5);
  CHECK(aps_for_floor_area(1000, 50) == 20);
  CHECK(aps_for_floor_area(1000, coverage_area_m2(Scenario::kLow)) == 10);
  CHECK(aps_for_floor_area(1000, coverage_area_m2(Scenario::kHigh)) == 4);
  CHECK(aps_for_floor_area(0, 200) == 0);
  CHECK(aps_for_floor_area(1000.0000000001, 200) == 5);
  CHECK(aps_for_floor_area(1001, 200) == 6);
  CHECK_THROWS_AS(aps_for_floor_area(10, 0), Error);

  StatArea a = area("A", 1, 1, {2, 0, 0, 0, 0});
  const PerCategory<double> floor{1000, 0, 0, 0, 0};
  const PerCategory<double> all{1, 1, 1, 1, 1};
  CHECK(predict_business_aps(a, floor, all, Scenario::kBaseline) == 5);
  BusinessModelOptions half;
  half.coverage_fraction = 0.5;
  CHECK(predict_business_aps(a, floor, all, Scenario::kBaseline, half) == 3);
  BusinessModelOptions draw;
  draw.mode = BusinessMode::kDraw;
  CHECK(predict_business_aps(a, floor, all, Scenario::kBaseline, draw) == 5);
  CHECK(predict_business_aps(a, floor, {0, 0, 0, 0, 0}, Scenario::kBaseline, draw) == 0);
}

namespace {

struct ThreeAreas {
  std::vector<StatArea> areas;
  std::vector<Individual> people;
  std::vector<Premise> premises;
};

ThreeAreas three_areas() {
  ThreeAreas f;
  f.areas = {area("U", 1, 10'000, {4, 1, 0, 0, 0}), area("S", 1, 2'000, {2, 0, 0, 0, 0}),
             area("R", 1, 200, {1, 0, 0, 0, 0})};
  f.areas[0].centroid = GeoPoint{52.20, 0.10};
  f.areas[1].centroid = GeoPoint{52.25, 0.10};
  f.areas[2].centroid = GeoPoint{52.30, 0.10};
  // 2-person households
  for (const auto& a : f.areas) {
    for (int i = 0; i < static_cast<int>(a.population); ++i) {
      f.people.push_back({a.area_id + std::to_string(i), a.area_id, "h" + std::to_string(i / 2), 45});
    }
  }
  int id = 0;
  for (const auto& a : f.areas) {
    Premise p;
    p.premise_id = "B" + std::to_string(id++);
    p.location = *a.centroid;
    p.floor_area_m2 = 1000;
    p.use = PremiseUse::kBusiness;
    f.premises.push_back(p);
  }
  return f;
}

}  // namespace

TEST_CASE("three-area model: density ordering follows household density") {
  const auto f = three_areas();
  const auto tables = constant_tables(1.0, 1.0);
  PredictOptions opt;
  opt.national_business_adoption_target = 1.0;
  const auto out = predict_all({f.areas, f.people, f.premises, &tables}, opt);
  REQUIRE(out.size() == 3);
  std::map<std::string, PredictedArea> by_id;
  for (const auto& p : out) by_id[p.area_id] = p;
  // every household adopts; 1000 m2 of business floor area at 200 m2 per AP
  CHECK(by_id["U"].residential_aps == 5000);
  CHECK(by_id["S"].residential_aps == 1000);
  CHECK(by_id["R"].residential_aps == 100);
  for (const auto& [id, p] : by_id) {
    CHECK(p.business_aps(Scenario::kBaseline) == 5);
    CHECK(p.business_aps(Scenario::kLow) == 10);
    CHECK(p.business_aps(Scenario::kHigh) == 4);
  }
  CHECK(by_id["U"].predicted_density_per_km2 == 5005.0);
  CHECK(by_id["U"].predicted_density_per_km2 > by_id["S"].predicted_density_per_km2);
  CHECK(by_id["S"].predicted_density_per_km2 > by_id["R"].predicted_density_per_km2);
}

TEST_CASE("whole model is deterministic for a seed") {
  const auto f = three_areas();
  const auto tables = constant_tables(0.8, 0.9);
  PredictOptions opt;
  opt.seed = 17;
  opt.business_mode = BusinessMode::kDraw;
  const auto a = predict_all({f.areas, f.people, f.premises, &tables}, opt);
  opt.threads = 4;
  const auto b = predict_all({f.areas, f.people, f.premises, &tables}, opt);
  const std::vector<Scenario> all(kAllScenarios.begin(), kAllScenarios.end());
  const auto text = write_predicted_csv(prediction_rows(a, all, 17));
  CHECK(write_predicted_csv(prediction_rows(b, all, 17)) == text);
  CHECK(write_predicted_csv(read_predicted_csv(text)) == text);
  opt.seed = 18;
  const auto c = predict_all({f.areas, f.people, f.premises, &tables}, opt);
  CHECK(write_predicted_csv(prediction_rows(c, all, 17)) != text);
}

TEST_CASE("empty area predicts zero density") {
  std::vector<StatArea> areas{area("Z", 2, 0)};
  areas[0].centroid = GeoPoint{52, 0};
  const auto tables = constant_tables(1, 1);
  const auto out = predict_all({areas, {}, {}, &tables}, PredictOptions{});
  REQUIRE(out.size() == 1);
  CHECK(out[0].predicted_density_per_km2 == 0.0);
}

TEST_CASE("areas CSV") {
  const auto areas = read_areas_csv(
      "area_id,region,area_km2,population,n_micro,n_small,n_medium,n_large,n_very_large,centroid_lat,centroid_lon\n"
      "B,east,2,1000,1,0,0,0,0,52.1,0.1\nA,east,0.5,5000,3,1,0,0,0,52.2,0.1\n");
  REQUIRE(areas.size() == 2);
  CHECK(areas[0].area_id == "A");
  CHECK(areas[0].geotype == Geotype::kUrban);
  CHECK(areas[1].geotype == Geotype::kRural);
  CHECK(areas[0].business_counts[1] == 1);
  CHECK_THROWS_AS(read_areas_csv("area_id,region,area_km2,population,n_micro,n_small,n_medium,n_large,n_very_large\n"
                                 "A,e,1,1,0,0,0,0,0\nA,e,1,1,0,0,0,0,0\n"),
                  Error);
}

TEST_CASE("nearest area: grid locator agrees with a linear scan") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  std::vector<StatArea> areas;
  for (int i = 0; i < 60; ++i) {
    StatArea a = area("A" + std::to_string(i), 1, 1);
    a.centroid = GeoPoint{52.2 + u(rng), 0.1 + u(rng)};
    areas.push_back(a);
  }
  const AreaLocator loc(areas);
  for (int q = 0; q < 500; ++q) {
    const GeoPoint p{52.2 + 2 * u(rng), 0.1 + 2 * u(rng)};
    std::size_t best = 0;
    for (std::size_t i = 1; i < areas.size(); ++i) {
      if (haversine_distance(p, *areas[i].centroid) < haversine_distance(p, *areas[best].centroid)) best = i;
    }
    CHECK(loc.nearest(p) == best);
    CHECK(nearest_area(p, areas) == best);
  }
}
