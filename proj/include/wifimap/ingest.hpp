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

#ifndef WIFIMAP_INGEST_HPP_
#define WIFIMAP_INGEST_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wifimap/geo.hpp"
#include "wifimap/timestamp.hpp"

namespace wifimap {

enum class NetType { kWifi, kBluetooth, kCell, kOther };

const char* to_string(NetType type);
NetType net_type_from_string(std::string_view text);

inline constexpr int kMinRssiDbm = -120;
inline constexpr int kMaxRssiDbm = 0;

/// One sighting of a network as exported by the collection app.
struct RawObservation {
  std::string bssid;  // canonical aa:bb:cc:dd:ee:ff
  std::string ssid;
  GeoPoint location;
  std::optional<int> rssi_dbm;
  std::optional<double> accuracy_m;
  std::optional<Timestamp> seen_at;
  NetType net_type = NetType::kWifi;
};

/// One unique network with the location it was heard best from.
struct ApRecord {
  std::string bssid;
  std::string ssid;
  GeoPoint location;
  std::optional<int> best_rssi_dbm;
  std::optional<Timestamp> first_seen;
  std::optional<Timestamp> last_seen;
  std::size_t observation_count = 1;

  friend bool operator==(const ApRecord&, const ApRecord&) = default;
};

struct FilterPolicy {
  double max_accuracy_m = 50.0;
  bool drop_zero_coords = true;
  bool wifi_only = true;
};

struct ParseReport {
  std::vector<RawObservation> observations;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Lower-case colon-separated MAC, or nullopt. Accepts ':' or '-'
/// separators, or 12 bare hex digits.
std::optional<std::string> canonical_mac(std::string_view text);

/// KML export: one observation per Placemark carrying a Point. Network
/// details come from "Key: Value" lines in the description. Bad placemarks
/// are counted in `skipped`; only malformed XML throws (kParse).
ParseReport parse_kml(std::string_view text);

/// WiGLE CSV export: preamble line, then the column header.
ParseReport parse_wigle_csv(std::string_view text);

/// Filters by policy, then keeps one record per BSSID located at its
/// strongest observation. Output sorted by BSSID.
std::vector<ApRecord> deduplicate(std::span<const RawObservation> observations,
                                  const FilterPolicy& policy = {});

bool passes(const FilterPolicy& policy, const RawObservation& obs);

std::string write_ap_csv(std::span<const ApRecord> records);
std::vector<ApRecord> read_ap_csv(std::string_view text);

std::vector<GeoPoint> locations_of(std::span<const ApRecord> records);

}  // namespace wifimap

#endif  // WIFIMAP_INGEST_HPP_
