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

#include "wifimap/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wifimap/error.hpp"

namespace wifimap {

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

void require_valid(const GeoPoint& p) {
  if (!is_valid(p)) {
    fail(ErrorKind::kInvalidCoordinate,
         fmt::format("invalid coordinate ({}, {})", p.lat, p.lon));
  }
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  require_valid(a);
  require_valid(b);
  const double phi1 = deg_to_rad(a.lat);
  const double phi2 = deg_to_rad(b.lat);
  const double dphi = phi2 - phi1;
  const double dlambda = deg_to_rad(b.lon - a.lon);
  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double buffer_area_km2(double radius_m) {
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("buffer radius must be positive, got {}", radius_m));
  }
  return kPi * radius_m * radius_m / 1e6;
}

BoundingBox bounding_box(std::span<const GeoPoint> points) {
  if (points.empty()) return {};
  BoundingBox box{points[0].lat, points[0].lon, points[0].lat, points[0].lon};
  for (const auto& p : points) {
    box.lat_min = std::min(box.lat_min, p.lat);
    box.lat_max = std::max(box.lat_max, p.lat);
    box.lon_min = std::min(box.lon_min, p.lon);
    box.lon_max = std::max(box.lon_max, p.lon);
  }
  return box;
}

GeoPoint centroid(std::span<const GeoPoint> points) {
  if (points.empty()) return {};
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const auto n = static_cast<double>(points.size());
  return {lat / n, lon / n};
}

bool buffer_exceeds(const BoundingBox& box, const CircularBuffer& buffer) {
  const double dlat = rad_to_deg(buffer.radius_m / kEarthRadiusM);
  const double cos_lat = std::cos(deg_to_rad(buffer.center.lat));
  const double dlon = cos_lat > 1e-12 ? dlat / cos_lat : 360.0;
  return buffer.center.lat - dlat < box.lat_min ||
         buffer.center.lat + dlat > box.lat_max ||
         buffer.center.lon - dlon < box.lon_min ||
         buffer.center.lon + dlon > box.lon_max;
}

LocalProjection::LocalProjection(GeoPoint origin)
    : origin_(origin), cos_origin_lat_(0.0) {
  require_valid(origin);
  cos_origin_lat_ = std::cos(deg_to_rad(origin.lat));
}

PlanarPoint LocalProjection::forward(const GeoPoint& p) const {
  require_valid(p);
  const double dlat = p.lat - origin_.lat;
  const double dlon = p.lon - origin_.lon;
  if (std::abs(dlat) >= kMaxSeparationDeg || std::abs(dlon) >= kMaxSeparationDeg) {
    fail(ErrorKind::kProjectionDomain,
         fmt::format("point ({}, {}) is more than {} degrees from origin ({}, {})",
                     p.lat, p.lon, kMaxSeparationDeg, origin_.lat, origin_.lon));
  }
  return {kEarthRadiusM * deg_to_rad(dlon) * cos_origin_lat_,
          kEarthRadiusM * deg_to_rad(dlat)};
}

GeoPoint LocalProjection::inverse(const PlanarPoint& p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    fail(ErrorKind::kInvalidCoordinate, "non-finite planar coordinate");
  }
  if (cos_origin_lat_ <= 0.0) {
    fail(ErrorKind::kProjectionDomain, "projection origin at a pole");
  }
  return {origin_.lat + rad_to_deg(p.y / kEarthRadiusM),
          origin_.lon + rad_to_deg(p.x / (kEarthRadiusM * cos_origin_lat_))};
}

PlanarPoint project_local(const GeoPoint& p, const GeoPoint& origin) {
  return LocalProjection(origin).forward(p);
}

GeoPoint unproject_local(const PlanarPoint& p, const GeoPoint& origin) {
  return LocalProjection(origin).inverse(p);
}

std::size_t SpatialIndex::CellKeyHash::operator()(const CellKey& k) const noexcept {
  auto mix = static_cast<std::uint64_t>(k.row) * 0x9E3779B97F4A7C15ULL;
  mix ^= static_cast<std::uint64_t>(k.col) + 0x7F4A7C159E3779B9ULL + (mix << 6) + (mix >> 2);
  return static_cast<std::size_t>(mix);
}

SpatialIndex::SpatialIndex(std::span<const GeoPoint> points, double cell_size_m)
    : SpatialIndex(points, centroid(points), cell_size_m) {}

SpatialIndex::SpatialIndex(std::span<const GeoPoint> points, GeoPoint origin,
                           double cell_size_m)
    : points_(points.begin(), points.end()),
      origin_(origin),
      cell_size_m_(cell_size_m) {
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("index cell size must be positive, got {}", cell_size_m));
  }
  require_valid(origin);
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::kInvalidParameter, "too many points for spatial index");
  }
  lat_step_deg_ = rad_to_deg(cell_size_m / kEarthRadiusM);
  lon_step_deg_ = lat_step_deg_ / std::max(std::cos(deg_to_rad(origin.lat)), 1e-6);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require_valid(points_[i]);
    cells_[{row_of(points_[i].lat), col_of(points_[i].lon)}].push_back(
        static_cast<std::uint32_t>(i));
  }
}

std::int64_t SpatialIndex::row_of(double lat) const {
  return static_cast<std::int64_t>(std::floor((lat - origin_.lat) / lat_step_deg_));
}

std::int64_t SpatialIndex::col_of(double lon) const {
  return static_cast<std::int64_t>(std::floor((lon - origin_.lon) / lon_step_deg_));
}

std::size_t SpatialIndex::total_cell_membership() const {
  std::size_t total = 0;
  for (const auto& [k, ids] : cells_) total += ids.size();
  return total;
}

std::vector<std::uint32_t> SpatialIndex::scan_all(const GeoPoint& center,
                                                  double radius_m) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (haversine_distance(center, points_[i]) <= radius_m) {
      out.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

std::vector<std::uint32_t> SpatialIndex::within(const GeoPoint& center,
                                                double radius_m) const {
  require_valid(center);
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("query radius must be positive, got {}", radius_m));
  }
  if (points_.empty()) return {};

  // The search box bounds the spherical cap exactly; a small relative pad
  // absorbs rounding so boundary points are never missed.
  const double angle = radius_m / kEarthRadiusM;
  if (angle >= kPi / 4.0) return scan_all(center, radius_m);
  const double pad = 1.0 + 1e-9;
  const double dlat = rad_to_deg(angle) * pad + 1e-12;
  const double lat_lo = center.lat - dlat;
  const double lat_hi = center.lat + dlat;
  if (lat_lo <= -90.0 || lat_hi >= 90.0) return scan_all(center, radius_m);
  const double s = std::sin(angle) / std::cos(deg_to_rad(center.lat));
  if (s >= 1.0) return scan_all(center, radius_m);
  const double dlon = rad_to_deg(std::asin(s)) * pad + 1e-12;
  const double lon_lo = center.lon - dlon;
  const double lon_hi = center.lon + dlon;
  if (lon_lo < -180.0 || lon_hi > 180.0) return scan_all(center, radius_m);

  const std::int64_t r0 = row_of(lat_lo);
  const std::int64_t r1 = row_of(lat_hi);
  const std::int64_t c0 = col_of(lon_lo);
  const std::int64_t c1 = col_of(lon_hi);
  const double span_cells = static_cast<double>(r1 - r0 + 1) * static_cast<double>(c1 - c0 + 1);
  std::vector<std::uint32_t> out;
  auto take = [&](const std::vector<std::uint32_t>& ids) {
    for (auto id : ids) {
      if (haversine_distance(center, points_[id]) <= radius_m) out.push_back(id);
    }
  };
  if (span_cells > static_cast<double>(cells_.size())) {
    for (const auto& [k, ids] : cells_) {
      if (k.row >= r0 && k.row <= r1 && k.col >= c0 && k.col <= c1) take(ids);
    }
  } else {
    for (std::int64_t r = r0; r <= r1; ++r) {
      for (std::int64_t c = c0; c <= c1; ++c) {
        if (auto it = cells_.find({r, c}); it != cells_.end()) take(it->second);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SpatialIndex::count_within(const GeoPoint& center, double radius_m) const {
  return within(center, radius_m).size();
}

std::vector<std::uint32_t> points_within(const SpatialIndex& index,
                                         const GeoPoint& center,
                                         double radius_m) {
  return index.within(center, radius_m);
}

}  // namespace wifimap
