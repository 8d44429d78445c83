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

// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "oracles.hpp"
#include "wifimap/cli.hpp"
#include "wifimap/density.hpp"
#include "wifimap/geo.hpp"
#include "wifimap/ingest.hpp"
#include "wifimap/predict.hpp"
#include "wifimap/rng.hpp"

using namespace wifimap;

namespace {

// Result of one criterion: pass/fail plus a short measured-value note.
struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

Outcome buffer_areas() {
  Outcome o;
  const std::pair<double, double> cases[] = {{100, 0.0314159}, {200, 0.1256637}, {300, 0.2827433}};
  for (auto [r, want] : cases) {
    const double got = buffer_area_km2(r);
    // the expected values are quoted to 7 decimals; compare against pi r^2 exactly
    // and against the quoted rounding.
    o.require(rel_close(got, std::acos(-1.0) * r * r / 1e6, 1e-9), fmt::format("r={} gave {}", r, got));
    o.require(std::abs(got - want) < 5e-8, fmt::format("r={} gave {:.7f}, expected {}", r, got, want));
  }
  o.require(std::round(buffer_area_km2(100) * 100) / 100 == 0.03, "100 m does not round to 0.03");
  o.require(std::round(buffer_area_km2(200) * 100) / 100 == 0.13, "200 m does not round to 0.13");
  o.require(std::round(buffer_area_km2(300) * 100) / 100 == 0.28, "300 m does not round to 0.28");
  if (o.pass) o.detail = fmt::format("{:.7f} / {:.7f} / {:.7f} km2", buffer_area_km2(100), buffer_area_km2(200), buffer_area_km2(300));
  return o;
}

Outcome business_bound() {
  Outcome o;
  const auto at200 = aps_for_floor_area(1000, coverage_area_m2(Scenario::kBaseline));
  const auto at50 = aps_for_floor_area(1000, 50);
  o.require(at200 == 5, fmt::format("1000 m2 at 200 m2/AP gave {}", at200));
  o.require(at50 == 20, fmt::format("1000 m2 at 50 m2/AP gave {}", at50));
  if (o.pass) o.detail = fmt::format("{} and {} APs", at200, at50);
  return o;
}

Outcome geotype_thresholds() {
  Outcome o;
  o.require(assign_geotype(10'000, 1) == Geotype::kUrban, "10000/km2 not urban");
  o.require(assign_geotype(5'000, 1) == Geotype::kSuburban, "5000/km2 not suburban");
  o.require(assign_geotype(500, 1) == Geotype::kRural, "500/km2 not rural");
  if (o.pass) o.detail = "urban / suburban / rural";
  return o;
}

std::vector<GeoPoint> random_instance(std::mt19937_64& rng, std::size_t n, int kind) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GeoPoint centres[] = {{52.2, 0.12}, {-33.9, 151.2}, {64.1, -21.9}, {0.0, 179.995}, {1.3, 103.8}};
  const GeoPoint c = centres[kind % 5];
  const double half_m = 500.0 + 4500.0 * (u(rng) + 1.0) / 2.0;
  std::vector<GeoPoint> pts;
  std::vector<GeoPoint> hubs;
  for (int h = 0; h < 6; ++h) hubs.push_back(oracle::jitter(rng, c, half_m));
  for (std::size_t i = 0; i < n; ++i) {
    GeoPoint p = (kind / 5) % 2 == 0 ? oracle::jitter(rng, c, half_m)
                                     : oracle::jitter(rng, hubs[i % hubs.size()], 150.0);
    if (p.lon > 180.0) p.lon -= 360.0;
    pts.push_back(p);
  }
  // exact duplicates exercise ties
  for (std::size_t i = 0; i + 7 < pts.size(); i += 97) pts[i + 7] = pts[i];
  return pts;
}

Outcome spatial_oracle() {
  Outcome o;
  std::mt19937_64 rng(20260401);
  std::size_t records = 0;
  std::size_t queries = 0;
  for (int inst = 0; inst < 50 && o.pass; ++inst) {
    std::uniform_int_distribution<std::size_t> size(50, 2000);
    const auto n = size(rng);
    const auto pts = random_instance(rng, n, inst);
    const SpatialIndex index(pts);
    std::uniform_real_distribution<double> ur(5.0, 800.0);
    for (int q = 0; q < 100; ++q) {
      const GeoPoint centre = pts[rng() % pts.size()];
      const double r = ur(rng);
      ++queries;
      if (points_within(index, centre, r) != oracle::brute_within(pts, centre, r)) {
        o.require(false, fmt::format("instance {} query {} differs", inst, q));
        break;
      }
    }
    const auto aps = oracle::aps_at(pts);
    std::vector<Premise> premises;
    const auto prem_pts = random_instance(rng, n / 2 + 1, inst);
    for (std::size_t i = 0; i < prem_pts.size(); ++i) {
      Premise p;
      p.premise_id = std::to_string(i);
      p.location = prem_pts[i];
      p.floor_area_m2 = 100;
      premises.push_back(p);
    }
    const std::vector<double> radii{100, 200, 300};
    const auto got = compute_buffer_densities(aps, premises, radii, 2);
    const auto want = oracle::brute_densities(aps, premises, radii);
    records += want.size();
    o.require(got == want, fmt::format("instance {} ({} points) density records differ", inst, n));
  }
  if (o.pass) o.detail = fmt::format("50 instances, {} queries, {} density records identical", queries, records);
  return o;
}

AdoptionTables constant_tables(double pb, double pw) {
  AdoptionTables t;
  for (auto* table : {&t.broadband, &t.wifi}) {
    const double p = table == &t.broadband ? pb : pw;
    table->age_band["0+"] = p;
    table->region["r"] = p;
    for (auto g : kAllGeotypes) table->settlement[g] = p;
  }
  t.broadband.stage = AdoptionStage::kBroadband;
  t.wifi.stage = AdoptionStage::kWifi;
  return t;
}

Outcome microsimulation() {
  Outcome o;
  std::vector<StatArea> areas;
  for (int i = 0; i < 10; ++i) {
    StatArea a;
    a.area_id = fmt::format("OA{:02d}", i);
    a.region = "r";
    a.area_km2 = 1;
    a.population = 10'000;
    a.geotype = assign_geotype(a.population, a.area_km2);
    areas.push_back(a);
  }
  std::vector<Individual> people;
  people.reserve(100'000);
  for (const auto& a : areas) {
    for (int h = 0; h < 10'000; ++h) people.push_back({fmt::format("{}-{}", a.area_id, h), a.area_id, std::to_string(h), 40});
  }
  const auto tables = constant_tables(0.8, 0.9);
  const double band = 3.0 * std::sqrt(100'000 * 0.72 * 0.28);
  double sum = 0;
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto per = simulate_residential(areas, people, tables, seed);
    const auto n = std::accumulate(per.begin(), per.end(), std::int64_t{0});
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    sum += static_cast<double>(n);
    o.require(std::abs(static_cast<double>(n) - 72'000.0) <= band,
              fmt::format("seed {}: {} adopters, outside 72000 +/- {:.1f}", seed, n, band));
  }
  const double mean_pct = sum / 30.0 / 100'000.0 * 100.0;
  o.require(std::abs(mean_pct - 72.0) <= 0.2, fmt::format("mean over seeds {:.4f}%", mean_pct));
  o.detail = fmt::format("{}{}range {}..{} (band +/-{:.1f}), mean {:.4f}%", o.detail, o.detail.empty() ? "" : "; ",
                         lo, hi, band, mean_pct);
  return o;
}

Outcome nesting() {
  Outcome o;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* bands[] = {"0-30", "30-60", "60+"};
  std::size_t households = 0, violations = 0, broadband = 0, wifi = 0;
  // 20 random table sets, 50,000 households each
  for (int t = 0; t < 20; ++t) {
    AdoptionTables tables;
    tables.broadband.stage = AdoptionStage::kBroadband;
    tables.wifi.stage = AdoptionStage::kWifi;
    for (auto* table : {&tables.broadband, &tables.wifi}) {
      for (const char* b : bands) table->age_band[b] = u(rng);
      for (const char* r : {"n", "s"}) table->region[r] = u(rng);
      for (auto g : kAllGeotypes) table->settlement[g] = u(rng);
      // exercise the closed ends too
      if (t % 5 == 0) table->age_band["0-30"] = 1.0;
      if (t % 7 == 0) table->region["s"] = 0.0;
    }
    std::vector<StatArea> areas;
    for (int i = 0; i < 5; ++i) {
      StatArea a;
      a.area_id = fmt::format("T{}A{}", t, i);
      a.region = i % 2 ? "n" : "s";
      a.area_km2 = 1;
      a.population = i * 3000.0;
      a.geotype = assign_geotype(a.population, 1);
      areas.push_back(a);
    }
    std::vector<Individual> people;
    people.reserve(50'000);
    for (int h = 0; h < 50'000; ++h) {
      people.push_back({std::to_string(h), areas[h % 5].area_id, std::to_string(h), 90.0 * u(rng)});
    }
    for (const auto& out : simulate_households(areas, people, tables, 1000 + t, 4)) {
      ++households;
      broadband += out.draw.a_broadband;
      wifi += out.draw.a_wifi;
      if (out.draw.a_wifi > out.draw.a_broadband) ++violations;
      if (!out.draw.a_broadband && out.draw.r_wifi) ++violations;
    }
  }
  o.require(households == 1'000'000, fmt::format("simulated {} households", households));
  o.require(violations == 0, fmt::format("{} households with a_W > a_B", violations));
  o.detail = fmt::format("{}{}{} households, {} broadband, {} Wi-Fi, {} violations", o.detail, o.detail.empty() ? "" : "; ",
                         households, broadband, wifi, violations);
  return o;
}

Outcome maup() {
  Outcome o;
  std::mt19937_64 rng(77);
  const GeoPoint origin{52.2, 0.12};
  std::vector<GeoPoint> clustered;
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  for (int c = 0; c < 12; ++c) {
    const GeoPoint hub{origin.lat + u(rng), origin.lon + u(rng)};
    for (int i = 0; i < 80; ++i) clustered.push_back(oracle::jitter(rng, hub, 120.0));
  }
  const std::vector<double> sizes{250, 500, 1000};
  const auto rep = maup_experiment(clustered, sizes, 3, origin);
  o.require(rep.rows.size() == 9, fmt::format("{} grid specs", rep.rows.size()));
  for (const auto& r : rep.rows) {
    std::size_t total = 0;
    const auto counts = grid_aggregate(clustered, {r.cell_size_m, r.offset_dx_m, r.offset_dy_m, origin});
    for (const auto& [cell, n] : counts) total += n;
    o.require(total == clustered.size() && r.total_count == clustered.size(),
              fmt::format("grid {}/{} holds {} of {}", r.cell_size_m, r.offset_dx_m, total, clustered.size()));
  }
  // 40 points within 30 m of a 1 km grid corner
  std::vector<GeoPoint> straddle;
  for (int i = 0; i < 40; ++i) straddle.push_back(oracle::jitter(rng, unproject_local({1000, 1000}, origin), 30.0));
  const auto s = maup_experiment(straddle, sizes, 3, origin);
  std::size_t range_1km = 0;
  for (const auto& sc : s.scales) {
    if (sc.cell_size_m == 1000) range_1km = sc.zoning_range;
  }
  o.require(range_1km >= 2, fmt::format("zoning range at 1000 m was {}", range_1km));
  if (o.pass) {
    o.detail = fmt::format("{} points conserved over 9 specs; straddling cluster zoning range {}", clustered.size(),
                           range_1km);
  }
  return o;
}

Outcome inflation() {
  Outcome o;
  std::mt19937_64 rng(88);
  std::vector<GeoPoint> pts;
  const double m_per_deg_lon = 111194.9 * std::cos(52.2 * kPi / 180.0);
  for (int c = 0; c < 6; ++c) {
    const GeoPoint centre{52.2, 0.12 + c * 1000.0 / m_per_deg_lon};
    // diameter 20 m
    for (int i = 0; i < 15; ++i) pts.push_back(oracle::jitter(rng, centre, 10.0));
  }
  const std::vector<double> radii{100, 200, 300};
  const auto recs = compute_buffer_densities(oracle::aps_at(pts), {}, radii);
  std::map<double, std::pair<double, int>> acc;
  for (const auto& r : recs) {
    acc[r.radius_m].first += r.ap_density_per_km2;
    ++acc[r.radius_m].second;
  }
  const double m100 = acc[100].first / acc[100].second;
  const double m200 = acc[200].first / acc[200].second;
  const double m300 = acc[300].first / acc[300].second;
  o.require(m100 > m200 && m200 > m300, fmt::format("means {} / {} / {}", m100, m200, m300));
  o.detail = fmt::format("mean density {:.2f} > {:.2f} > {:.2f} APs/km2", m100, m200, m300);
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto config = oracle::fixture("pipeline/pipeline.ini").string();
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* threads : {"1", "1", "8"}) {
    const auto dir = oracle::scratch_dir("accept");
    std::ostringstream out, err;
    const int code = run({"wifimap", "pipeline", "--config", config, "--out-dir", dir.string(), "--threads", threads},
                         out, err);
    o.require(code == kExitOk, fmt::format("pipeline exit {}: {}", code, err.str()));
    runs.push_back(oracle::tree(dir));
    std::filesystem::remove_all(dir);
  }
  o.require(!runs[0].empty(), "no outputs");
  o.require(runs[0] == runs[1], "two single-thread runs differ");
  o.require(runs[0] == runs[2], "1-thread and 8-thread runs differ");
  std::size_t bytes = 0;
  for (const auto& [name, content] : runs[0]) bytes += content.size();
  if (o.pass) o.detail = fmt::format("{} files, {} bytes identical across 3 runs (threads 1, 1, 8)", runs[0].size(), bytes);
  return o;
}

Outcome ingest_robustness() {
  Outcome o;
  const auto kml = parse_kml(oracle::slurp(oracle::fixture("malformed.kml")));
  o.require(kml.observations.size() == 7 && kml.warnings.size() == 3,
            fmt::format("KML gave {} observations / {} warnings", kml.observations.size(), kml.warnings.size()));
  const auto csv = parse_wigle_csv(oracle::slurp(oracle::fixture("malformed_wigle.csv")));
  o.require(csv.observations.size() == 18 && csv.warnings.size() == 2,
            fmt::format("CSV gave {} observations / {} warnings", csv.observations.size(), csv.warnings.size()));
  std::vector<RawObservation> all = kml.observations;
  all.insert(all.end(), csv.observations.begin(), csv.observations.end());
  // extra repeated sightings so order matters to a naive implementation
  std::mt19937_64 rng(10);
  for (int i = 0; i < 40; ++i) {
    auto copy = all[rng() % all.size()];
    copy.rssi_dbm = -30 - static_cast<int>(rng() % 60);
    copy.location.lat += 1e-5 * static_cast<double>(rng() % 7);
    all.push_back(copy);
  }
  const auto reference = deduplicate(all);
  o.require(reference == oracle::sort_then_scan(all, FilterPolicy{}), "dedup differs from sort-then-scan oracle");
  for (int k = 0; k < 20; ++k) {
    std::shuffle(all.begin(), all.end(), rng);
    o.require(deduplicate(all) == reference, fmt::format("shuffle {} changed the dedup output", k));
  }
  if (o.pass) {
    o.detail = fmt::format("KML 7 obs / 3 warnings, CSV 18 obs / 2 warnings, {} APs stable over 20 shuffles",
                           reference.size());
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "buffer areas", 1, buffer_areas},
      {2, "business AP bound", 1, business_bound},
      {3, "geotype thresholds", 1, geotype_thresholds},
      {4, "spatial oracle equivalence", 30, spatial_oracle},
      {5, "microsimulation calibration", 10, microsimulation},
      {6, "adoption nesting invariant", 10, nesting},
      {7, "MAUP suite", 5, maup},
      {8, "density inflation", 5, inflation},
      {9, "pipeline determinism", 30, determinism},
      {10, "ingest robustness", 5, ingest_robustness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt::format(" (over the {:.0f} s budget)", c.budget_s);
    }
    failed += o.pass ? 0 : 1;
    std::cout << fmt::format("[{}] criterion {:>2}: {} ({:.2f} s): {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                             secs, o.detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", std::size(criteria) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
