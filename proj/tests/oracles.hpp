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

// Reference implementations used only by the tests. They are written to be
// obviously correct rather than fast and share no code with the library.

#ifndef WIFIMAP_TESTS_ORACLES_HPP_
#define WIFIMAP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "wifimap/density.hpp"
#include "wifimap/geo.hpp"
#include "wifimap/ingest.hpp"

namespace oracle {

inline constexpr double kR = 6'371'000.0;

/// Great-circle distance from the chord between unit vectors.
inline double chord_distance(const wifimap::GeoPoint& a, const wifimap::GeoPoint& b) {
  const double d = std::acos(-1.0) / 180.0;
  auto xyz = [&](const wifimap::GeoPoint& p) {
    return std::array<double, 3>{std::cos(p.lat * d) * std::cos(p.lon * d),
                                 std::cos(p.lat * d) * std::sin(p.lon * d), std::sin(p.lat * d)};
  };
  const auto u = xyz(a);
  const auto v = xyz(b);
  const double c = std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) +
                             (u[2] - v[2]) * (u[2] - v[2]));
  return 2.0 * kR * std::asin(std::min(1.0, c / 2.0));
}

/// Spherical law of cosines; fine away from tiny separations.
inline double cosine_law_distance(const wifimap::GeoPoint& a, const wifimap::GeoPoint& b) {
  const double d = std::acos(-1.0) / 180.0;
  const double c = std::sin(a.lat * d) * std::sin(b.lat * d) +
                   std::cos(a.lat * d) * std::cos(b.lat * d) * std::cos((b.lon - a.lon) * d);
  return kR * std::acos(std::clamp(c, -1.0, 1.0));
}

/// Ids of points within r by a linear scan with the library's own metric,
/// so the comparison isolates the index from floating-point metric noise.
inline std::vector<std::uint32_t> brute_within(const std::vector<wifimap::GeoPoint>& pts,
                                               const wifimap::GeoPoint& c, double r) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    if (wifimap::haversine_distance(c, pts[i]) <= r) out.push_back(i);
  }
  return out;
}

/// O(n^2) buffer densities, one record per (AP, radius) sorted by bssid then radius.
inline std::vector<wifimap::DensityRecord> brute_densities(
    const std::vector<wifimap::ApRecord>& aps, const std::vector<wifimap::Premise>& premises,
    std::vector<double> radii) {
  std::sort(radii.begin(), radii.end());
  std::vector<wifimap::ApRecord> sorted = aps;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.bssid < b.bssid; });
  std::vector<wifimap::DensityRecord> out;
  for (const auto& ap : sorted) {
    for (double r : radii) {
      wifimap::DensityRecord rec;
      rec.bssid = ap.bssid;
      rec.radius_m = r;
      for (const auto& other : aps) {
        if (wifimap::haversine_distance(ap.location, other.location) <= r) ++rec.ap_count;
      }
      for (const auto& p : premises) {
        if (wifimap::haversine_distance(ap.location, p.location) <= r) ++rec.premises_count;
      }
      const double km2 = std::acos(-1.0) * r * r / 1e6;
      rec.ap_density_per_km2 = static_cast<double>(rec.ap_count) / km2;
      rec.premises_density_per_km2 = static_cast<double>(rec.premises_count) / km2;
      out.push_back(rec);
    }
  }
  return out;
}

/// Dedup by sorting observations into (bssid, preference) order and taking
/// the first of each run.
inline std::vector<wifimap::ApRecord> sort_then_scan(std::vector<wifimap::RawObservation> obs,
                                                     const wifimap::FilterPolicy& policy) {
  std::erase_if(obs, [&](const auto& o) { return !wifimap::passes(policy, o); });
  auto loc_key = [](const wifimap::RawObservation& o) {
    return fmt::format("{},{}", o.location.lat, o.location.lon);
  };
  std::sort(obs.begin(), obs.end(), [&](const auto& a, const auto& b) {
    if (a.bssid != b.bssid) return a.bssid < b.bssid;
    const int ra = a.rssi_dbm.value_or(-120);
    const int rb = b.rssi_dbm.value_or(-120);
    if (ra != rb) return ra > rb;
    if (a.seen_at.has_value() != b.seen_at.has_value()) return a.seen_at.has_value();
    if (a.seen_at && *a.seen_at != *b.seen_at) return *a.seen_at < *b.seen_at;
    if (loc_key(a) != loc_key(b)) return loc_key(a) < loc_key(b);
    return a.ssid < b.ssid;
  });
  std::vector<wifimap::ApRecord> out;
  for (std::size_t i = 0; i < obs.size();) {
    std::size_t j = i;
    wifimap::ApRecord rec;
    rec.bssid = obs[i].bssid;
    rec.ssid = obs[i].ssid;
    rec.location = obs[i].location;
    rec.observation_count = 0;
    for (; j < obs.size() && obs[j].bssid == obs[i].bssid; ++j) {
      ++rec.observation_count;
      if (obs[j].rssi_dbm && (!rec.best_rssi_dbm || *obs[j].rssi_dbm > *rec.best_rssi_dbm)) {
        rec.best_rssi_dbm = obs[j].rssi_dbm;
      }
      if (obs[j].seen_at) {
        if (!rec.first_seen || *obs[j].seen_at < *rec.first_seen) rec.first_seen = obs[j].seen_at;
        if (!rec.last_seen || *obs[j].seen_at > *rec.last_seen) rec.last_seen = obs[j].seen_at;
      }
    }
    out.push_back(rec);
    i = j;
  }
  return out;
}

/// Sorted ascending, n split into ten slices where slice k holds ranks
/// floor(k*n/10) .. floor((k+1)*n/10)-1 when n >= 10.
inline std::array<double, 10> sort_and_slice(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::array<double, 10> out{};
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < 10; ++k) {
    const std::size_t lo = k * n / 10;
    const std::size_t hi = (k + 1) * n / 10;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    out[k] = s / static_cast<double>(hi - lo);
  }
  return out;
}

/// Uniform point within `radius_m` of `c`, by rejection in a local square.
inline wifimap::GeoPoint jitter(std::mt19937_64& rng, const wifimap::GeoPoint& c, double radius_m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double m_per_deg = kR * std::acos(-1.0) / 180.0;
  for (;;) {
    const double x = u(rng);
    const double y = u(rng);
    if (x * x + y * y > 1.0) continue;
    return {c.lat + y * radius_m / m_per_deg,
            c.lon + x * radius_m / (m_per_deg * std::cos(c.lat * std::acos(-1.0) / 180.0))};
  }
}

inline std::string mac_for(std::uint64_t i) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "02:00:%02x:%02x:%02x:%02x", static_cast<unsigned>((i >> 24) & 255),
                static_cast<unsigned>((i >> 16) & 255), static_cast<unsigned>((i >> 8) & 255),
                static_cast<unsigned>(i & 255));
  return buf;
}

inline std::vector<wifimap::ApRecord> aps_at(const std::vector<wifimap::GeoPoint>& pts) {
  std::vector<wifimap::ApRecord> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    wifimap::ApRecord r;
    r.bssid = mac_for(i);
    r.location = pts[i];
    out.push_back(r);
  }
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(WIFIMAP_FIXTURE_DIR) / name;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("wifimap-" + tag + "-" + std::to_string(rng() % 1000000000));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Every regular file under root, keyed by relative path.
inline std::map<std::string, std::string> tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
  }
  return out;
}

}  // namespace oracle

#endif  // WIFIMAP_TESTS_ORACLES_HPP_
