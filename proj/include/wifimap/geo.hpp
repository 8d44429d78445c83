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

#ifndef WIFIMAP_GEO_HPP_
#define WIFIMAP_GEO_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace wifimap {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// WGS84 position in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Metres east (x) and north (y) of a projection origin.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

struct CircularBuffer {
  GeoPoint center;
  double radius_m = 0.0;
};

struct BoundingBox {
  double lat_min = 0.0;
  double lon_min = 0.0;
  double lat_max = 0.0;
  double lon_max = 0.0;

  bool contains(const GeoPoint& p) const {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min &&
           p.lon <= lon_max;
  }
};

/// Finite and inside [-90,90] x [-180,180].
bool is_valid(const GeoPoint& p);

/// Throws kInvalidCoordinate unless is_valid(p).
void require_valid(const GeoPoint& p);

/// Great-circle distance in metres on a sphere of radius kEarthRadiusM.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

/// Area of a circle of the given radius, in km^2.
double buffer_area_km2(double radius_m);

/// Smallest box containing every point. Empty input gives a zero box.
BoundingBox bounding_box(std::span<const GeoPoint> points);

/// Mean latitude and longitude. Empty input gives (0, 0).
GeoPoint centroid(std::span<const GeoPoint> points);

/// True when the buffer reaches outside `box`.
bool buffer_exceeds(const BoundingBox& box, const CircularBuffer& buffer);

// Equirectangular projection about a fixed origin. Valid for points within
// kMaxSeparationDeg of the origin on both axes.
class LocalProjection {
 public:
  static constexpr double kMaxSeparationDeg = 2.0;

  explicit LocalProjection(GeoPoint origin);

  const GeoPoint& origin() const { return origin_; }

  PlanarPoint forward(const GeoPoint& p) const;
  GeoPoint inverse(const PlanarPoint& p) const;

 private:
  GeoPoint origin_;
  double cos_origin_lat_;
};

PlanarPoint project_local(const GeoPoint& p, const GeoPoint& origin);
GeoPoint unproject_local(const PlanarPoint& p, const GeoPoint& origin);

// Uniform grid over (lat, lon) whose cells are cell_size_m square at the
// origin latitude. Ids are insertion positions. Immutable once built, so
// concurrent queries are safe.
class SpatialIndex {
 public:
  static constexpr double kDefaultCellSizeM = 300.0;

  SpatialIndex() = default;
  explicit SpatialIndex(std::span<const GeoPoint> points,
                        double cell_size_m = kDefaultCellSizeM);
  SpatialIndex(std::span<const GeoPoint> points, GeoPoint origin,
               double cell_size_m);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double cell_size_m() const { return cell_size_m_; }
  const GeoPoint& origin() const { return origin_; }
  const GeoPoint& point(std::size_t id) const { return points_[id]; }

  /// Ids of the points with haversine distance <= radius_m, ascending.
  std::vector<std::uint32_t> within(const GeoPoint& center,
                                    double radius_m) const;
  std::size_t count_within(const GeoPoint& center, double radius_m) const;

  // Populated cells and the summed size of their id lists.
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t total_cell_membership() const;

 private:
  struct CellKey {
    std::int64_t row;
    std::int64_t col;
    friend bool operator==(const CellKey&, const CellKey&) = default;
  };
  struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };

  std::int64_t row_of(double lat) const;
  std::int64_t col_of(double lon) const;
  std::vector<std::uint32_t> scan_all(const GeoPoint& center,
                                      double radius_m) const;

  std::vector<GeoPoint> points_;
  GeoPoint origin_;
  double cell_size_m_ = kDefaultCellSizeM;
  double lat_step_deg_ = 0.0;
  double lon_step_deg_ = 0.0;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellKeyHash> cells_;
};

std::vector<std::uint32_t> points_within(const SpatialIndex& index,
                                         const GeoPoint& center,
                                         double radius_m);

}  // namespace wifimap

#endif  // WIFIMAP_GEO_HPP_
