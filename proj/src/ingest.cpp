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

#include "wifimap/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "wifimap/csv.hpp"
#include "wifimap/error.hpp"

namespace wifimap {

namespace pt = boost::property_tree;

const char* to_string(NetType type) {
  switch (type) {
    case NetType::kWifi: return "WIFI";
    case NetType::kBluetooth: return "BT";
    case NetType::kCell: return "CELL";
    case NetType::kOther: return "OTHER";
  }
  return "OTHER";
}

NetType net_type_from_string(std::string_view text) {
  std::string t;
  for (char c : trim(text)) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t == "WIFI" || t == "W" || t == "INFRA") return NetType::kWifi;
  if (t == "BT" || t == "BLE" || t == "BLUETOOTH") return NetType::kBluetooth;
  if (t == "CELL" || t == "GSM" || t == "LTE" || t == "WCDMA" || t == "CDMA" || t == "NR" ||
      t == "UMTS") {
    return NetType::kCell;
  }
  return NetType::kOther;
}

std::optional<std::string> canonical_mac(std::string_view text) {
  text = trim(text);
  std::string hex;
  if (text.size() == 17) {
    const char sep = text[2];
    if (sep != ':' && sep != '-') return std::nullopt;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (i % 3 == 2) {
        if (text[i] != sep) return std::nullopt;
      } else {
        hex.push_back(text[i]);
      }
    }
  } else if (text.size() == 12) {
    hex = std::string(text);
  } else {
    return std::nullopt;
  }
  std::string out;
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const auto c = static_cast<unsigned char>(hex[i]);
    if (!std::isxdigit(c)) return std::nullopt;
    if (i && i % 2 == 0) out.push_back(':');
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

namespace {

std::string_view local_name(std::string_view tag) {
  if (auto colon = tag.rfind(':'); colon != std::string_view::npos) tag.remove_prefix(colon + 1);
  return tag;
}

const pt::ptree* child_named(const pt::ptree& node, std::string_view name) {
  for (const auto& [tag, child] : node) {
    if (local_name(tag) == name) return &child;
  }
  return nullptr;
}

void collect_placemarks(const pt::ptree& node, std::vector<const pt::ptree*>& out) {
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (local_name(tag) == "Placemark") {
      out.push_back(&child);
    } else {
      collect_placemarks(child, out);
    }
  }
}

// Description blocks hold "Key: Value" pairs separated by newlines or <br>.
std::map<std::string, std::string> description_fields(std::string text) {
  for (const std::string_view br : {"<br/>", "<br />", "<br>", "<BR>", "<BR/>"}) {
    std::size_t pos = 0;
    while ((pos = text.find(br, pos)) != std::string::npos) text.replace(pos, br.size(), "\n");
  }
  std::map<std::string, std::string> fields;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key;
    for (char c : trim(std::string_view(line).substr(0, colon))) {
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    fields.emplace(key, std::string(trim(std::string_view(line).substr(colon + 1))));
  }
  return fields;
}

const std::string* field(const std::map<std::string, std::string>& fields,
                         std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (auto it = fields.find(k); it != fields.end()) return &it->second;
  }
  return nullptr;
}

std::optional<int> parse_rssi(std::string_view text) {
  const auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) return std::nullopt;
  const auto r = static_cast<int>(std::lround(*v));
  if (r < kMinRssiDbm || r > kMaxRssiDbm) return std::nullopt;
  return r;
}

class WarningSink {
 public:
  explicit WarningSink(ParseReport& report) : report_(report) {}
  void skip(std::string message) {
    ++report_.skipped;
    report_.warnings.push_back(std::move(message));
  }

 private:
  ParseReport& report_;
};

}  // namespace

ParseReport parse_kml(std::string_view text) {
  ParseReport report;
  if (trim(text).empty()) return report;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    fail(ErrorKind::kParse, fmt::format("malformed KML at line {}: {}", e.line(), e.message()));
  }

  std::vector<const pt::ptree*> placemarks;
  collect_placemarks(tree, placemarks);
  WarningSink warn(report);
  for (std::size_t n = 0; n < placemarks.size(); ++n) {
    const pt::ptree& pm = *placemarks[n];
    const auto ordinal = n + 1;
    const pt::ptree* point = child_named(pm, "Point");
    const pt::ptree* coords = point ? child_named(*point, "coordinates") : nullptr;
    if (!coords) {
      warn.skip(fmt::format("placemark {}: no Point coordinates", ordinal));
      continue;
    }
    // lon,lat[,alt]
    const std::string raw{trim(coords->data())};
    std::vector<std::string_view> parts;
    std::string_view rest = raw;
    while (true) {
      const auto comma = rest.find(',');
      parts.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const auto lon = parts.size() >= 2 ? parse_double(parts[0]) : std::nullopt;
    const auto lat = parts.size() >= 2 ? parse_double(parts[1]) : std::nullopt;
    if (!lon || !lat || parts.size() > 3 || !is_valid(GeoPoint{*lat, *lon})) {
      warn.skip(fmt::format("placemark {}: bad coordinates '{}'", ordinal, raw));
      continue;
    }

    RawObservation obs;
    obs.location = {*lat, *lon};
    if (const auto* name = child_named(pm, "name")) obs.ssid = std::string(trim(name->data()));
    const pt::ptree* desc = child_named(pm, "description");
    const auto fields = description_fields(desc ? desc->data() : std::string());

    const std::string* id = field(fields, {"network id", "bssid", "mac", "netid"});
    const auto mac = id ? canonical_mac(*id) : std::nullopt;
    if (!mac) {
      warn.skip(fmt::format("placemark {}: missing or invalid network id", ordinal));
      continue;
    }
    obs.bssid = *mac;
    if (const auto* s = field(fields, {"signal", "rssi", "level"})) {
      obs.rssi_dbm = parse_rssi(*s);
      if (!obs.rssi_dbm) {
        warn.skip(fmt::format("placemark {}: bad signal '{}'", ordinal, *s));
        continue;
      }
    }
    if (const auto* a = field(fields, {"accuracy"})) {
      obs.accuracy_m = parse_double(*a);
      if (!obs.accuracy_m || !(*obs.accuracy_m >= 0.0)) {
        warn.skip(fmt::format("placemark {}: bad accuracy '{}'", ordinal, *a));
        continue;
      }
    }
    if (const auto* t = field(fields, {"time", "timestamp", "firstseen"})) {
      obs.seen_at = parse_timestamp(*t);
      if (!obs.seen_at) {
        warn.skip(fmt::format("placemark {}: bad time '{}'", ordinal, *t));
        continue;
      }
    }
    if (const auto* t = field(fields, {"type"})) obs.net_type = net_type_from_string(*t);
    report.observations.push_back(std::move(obs));
  }
  return report;
}

ParseReport parse_wigle_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto eol = text.find('\n');
  const std::string_view preamble = text.substr(0, eol);
  if (!trim(preamble).starts_with("WigleWifi-")) {
    fail(ErrorKind::kFormat, "missing WigleWifi preamble line");
  }
  if (eol == std::string_view::npos || trim(text.substr(eol + 1)).empty()) {
    fail(ErrorKind::kFormat, "missing WiGLE column header");
  }
  const CsvTable table = parse_csv(text.substr(eol + 1));
  static constexpr std::string_view kColumns[] = {
      "MAC", "SSID", "AuthMode", "FirstSeen", "Channel", "RSSI", "CurrentLatitude",
      "CurrentLongitude", "AltitudeMeters", "AccuracyMeters", "Type"};
  for (auto name : kColumns) {
    if (!table.column(name)) {
      fail(ErrorKind::kFormat, fmt::format("WiGLE header lacks column '{}'", name));
    }
  }
  const auto c_mac = table.require_column("MAC");
  const auto c_ssid = table.require_column("SSID");
  const auto c_seen = table.require_column("FirstSeen");
  const auto c_rssi = table.require_column("RSSI");
  const auto c_lat = table.require_column("CurrentLatitude");
  const auto c_lon = table.require_column("CurrentLongitude");
  const auto c_acc = table.require_column("AccuracyMeters");
  const auto c_type = table.require_column("Type");

  ParseReport report;
  WarningSink warn(report);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    // Header is on line 2 of the file.
    const auto line = table.line_of[i] + 1;
    if (row.size() < table.header.size()) {
      warn.skip(fmt::format("line {}: expected {} fields, got {}", line, table.header.size(),
                            row.size()));
      continue;
    }
    RawObservation obs;
    const auto mac = canonical_mac(row[c_mac]);
    if (!mac) {
      warn.skip(fmt::format("line {}: invalid MAC '{}'", line, row[c_mac]));
      continue;
    }
    obs.bssid = *mac;
    obs.ssid = row[c_ssid];
    const auto lat = parse_double(row[c_lat]);
    const auto lon = parse_double(row[c_lon]);
    if (!lat || !lon || !is_valid(GeoPoint{*lat, *lon})) {
      warn.skip(fmt::format("line {}: bad coordinates", line));
      continue;
    }
    obs.location = {*lat, *lon};
    if (!trim(row[c_rssi]).empty()) {
      obs.rssi_dbm = parse_rssi(row[c_rssi]);
      if (!obs.rssi_dbm) {
        warn.skip(fmt::format("line {}: bad RSSI '{}'", line, row[c_rssi]));
        continue;
      }
    }
    if (!trim(row[c_acc]).empty()) {
      obs.accuracy_m = parse_double(row[c_acc]);
      if (!obs.accuracy_m || !(*obs.accuracy_m >= 0.0)) {
        warn.skip(fmt::format("line {}: bad accuracy '{}'", line, row[c_acc]));
        continue;
      }
    }
    if (!trim(row[c_seen]).empty()) {
      obs.seen_at = parse_timestamp(row[c_seen]);
      if (!obs.seen_at) {
        warn.skip(fmt::format("line {}: bad FirstSeen '{}'", line, row[c_seen]));
        continue;
      }
    }
    obs.net_type = net_type_from_string(row[c_type]);
    report.observations.push_back(std::move(obs));
  }
  return report;
}

bool passes(const FilterPolicy& policy, const RawObservation& obs) {
  if (policy.wifi_only && obs.net_type != NetType::kWifi) return false;
  if (!is_valid(obs.location)) return false;
  if (policy.drop_zero_coords && obs.location.lat == 0.0 && obs.location.lon == 0.0) return false;
  if (obs.accuracy_m && *obs.accuracy_m > policy.max_accuracy_m) return false;
  return true;
}

namespace {

std::string location_key(const GeoPoint& p) {
  return format_exact(p.lat) + "," + format_exact(p.lon);
}

// True when a is the better representative than b.
bool better_representative(const RawObservation& a, const RawObservation& b) {
  const int ra = a.rssi_dbm.value_or(kMinRssiDbm);
  const int rb = b.rssi_dbm.value_or(kMinRssiDbm);
  if (ra != rb) return ra > rb;
  if (a.seen_at != b.seen_at) {
    if (!a.seen_at) return false;
    if (!b.seen_at) return true;
    return *a.seen_at < *b.seen_at;
  }
  const auto ka = location_key(a.location);
  const auto kb = location_key(b.location);
  if (ka != kb) return ka < kb;
  return a.ssid < b.ssid;
}

}  // namespace

std::vector<ApRecord> deduplicate(std::span<const RawObservation> observations,
                                  const FilterPolicy& policy) {
  if (!(policy.max_accuracy_m > 0.0)) {
    fail(ErrorKind::kInvalidParameter, "max_accuracy_m must be positive");
  }
  std::map<std::string_view, std::vector<const RawObservation*>> groups;
  for (const auto& obs : observations) {
    if (passes(policy, obs)) groups[obs.bssid].push_back(&obs);
  }
  std::vector<ApRecord> out;
  out.reserve(groups.size());
  for (const auto& [bssid, members] : groups) {
    const RawObservation* best = members.front();
    ApRecord rec;
    rec.bssid = std::string(bssid);
    rec.observation_count = members.size();
    for (const auto* m : members) {
      if (better_representative(*m, *best)) best = m;
      if (m->rssi_dbm && (!rec.best_rssi_dbm || *m->rssi_dbm > *rec.best_rssi_dbm)) {
        rec.best_rssi_dbm = m->rssi_dbm;
      }
      if (m->seen_at) {
        if (!rec.first_seen || *m->seen_at < *rec.first_seen) rec.first_seen = m->seen_at;
        if (!rec.last_seen || *m->seen_at > *rec.last_seen) rec.last_seen = m->seen_at;
      }
    }
    rec.ssid = best->ssid;
    rec.location = best->location;
    out.push_back(std::move(rec));
  }
  return out;
}

std::string write_ap_csv(std::span<const ApRecord> records) {
  CsvWriter w{"bssid", "ssid", "lat", "lon", "best_rssi_dbm", "first_seen", "last_seen",
              "observation_count"};
  for (const auto& r : records) {
    w.row({r.bssid, r.ssid, format_exact(r.location.lat), format_exact(r.location.lon),
           r.best_rssi_dbm ? std::to_string(*r.best_rssi_dbm) : std::string(),
           r.first_seen ? format_timestamp(*r.first_seen) : std::string(),
           r.last_seen ? format_timestamp(*r.last_seen) : std::string(),
           std::to_string(r.observation_count)});
  }
  return w.str();
}

std::vector<ApRecord> read_ap_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const auto c_bssid = table.require_column("bssid");
  const auto c_ssid = table.require_column("ssid");
  const auto c_lat = table.require_column("lat");
  const auto c_lon = table.require_column("lon");
  const auto c_rssi = table.require_column("best_rssi_dbm");
  const auto c_first = table.require_column("first_seen");
  const auto c_last = table.require_column("last_seen");
  const auto c_count = table.require_column("observation_count");
  std::vector<ApRecord> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = fmt::format("AP CSV line {}", table.line_of[i]);
    if (row.size() != table.header.size()) {
      fail(ErrorKind::kFormat, where + ": wrong field count");
    }
    ApRecord r;
    const auto mac = canonical_mac(row[c_bssid]);
    const auto lat = parse_double(row[c_lat]);
    const auto lon = parse_double(row[c_lon]);
    const auto count = parse_int(row[c_count]);
    if (!mac || !lat || !lon || !is_valid(GeoPoint{*lat, *lon}) || !count || *count < 1) {
      fail(ErrorKind::kFormat, where + ": invalid record");
    }
    r.bssid = *mac;
    r.ssid = row[c_ssid];
    r.location = {*lat, *lon};
    r.observation_count = static_cast<std::size_t>(*count);
    if (!trim(row[c_rssi]).empty()) {
      const auto v = parse_int(row[c_rssi]);
      if (!v) fail(ErrorKind::kFormat, where + ": bad best_rssi_dbm");
      r.best_rssi_dbm = static_cast<int>(*v);
    }
    if (!trim(row[c_first]).empty()) {
      r.first_seen = parse_timestamp(row[c_first]);
      if (!r.first_seen) fail(ErrorKind::kFormat, where + ": bad first_seen");
    }
    if (!trim(row[c_last]).empty()) {
      r.last_seen = parse_timestamp(row[c_last]);
      if (!r.last_seen) fail(ErrorKind::kFormat, where + ": bad last_seen");
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const ApRecord& a, const ApRecord& b) { return a.bssid < b.bssid; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].bssid == out[i - 1].bssid) {
      fail(ErrorKind::kFormat, fmt::format("duplicate bssid {} in AP CSV", out[i].bssid));
    }
  }
  return out;
}

std::vector<GeoPoint> locations_of(std::span<const ApRecord> records) {
  std::vector<GeoPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.location);
  return out;
}

}  // namespace wifimap
