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

#include "wifimap/wigle.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "wifimap/error.hpp"

namespace wifimap {

using nlohmann::json;

WigleCredentials WigleCredentials::from_environment() {
  const char* name = std::getenv("WIGLE_API_NAME");
  const char* token = std::getenv("WIGLE_API_TOKEN");
  if (!name || !*name || !token || !*token) {
    fail(ErrorKind::kCredential, "WIGLE_API_NAME and WIGLE_API_TOKEN must both be set");
  }
  return {name, token};
}

namespace {

std::string string_field(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

std::optional<double> number_field(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_number()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

FetchResult parse_search_page(std::string_view body, std::string* search_after) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kFormat, fmt::format("undecodable WiGLE response: {}", e.what()));
  }
  if (!doc.is_object()) fail(ErrorKind::kFormat, "WiGLE response is not an object");
  if (auto ok = doc.find("success"); ok != doc.end() && ok->is_boolean() && !ok->get<bool>()) {
    fail(ErrorKind::kTransport, fmt::format("WiGLE search failed: {}", string_field(doc, "message")));
  }
  if (search_after) {
    search_after->clear();
    if (auto it = doc.find("searchAfter"); it != doc.end()) {
      if (it->is_string()) {
        *search_after = it->get<std::string>();
      } else if (it->is_number_integer()) {
        *search_after = std::to_string(it->get<long long>());
      }
    }
  }
  FetchResult page;
  auto results = doc.find("results");
  if (results == doc.end() || results->is_null()) return page;
  if (!results->is_array()) fail(ErrorKind::kFormat, "WiGLE 'results' is not an array");
  for (const auto& rec : *results) {
    if (!rec.is_object()) {
      ++page.skipped;
      continue;
    }
    const auto mac = canonical_mac(string_field(rec, "netid"));
    const auto lat = number_field(rec, "trilat");
    const auto lon = number_field(rec, "trilong");
    if (!mac || !lat || !lon || !is_valid(GeoPoint{*lat, *lon})) {
      ++page.skipped;
      continue;
    }
    RawObservation obs;
    obs.bssid = *mac;
    obs.ssid = string_field(rec, "ssid");
    obs.location = {*lat, *lon};
    obs.net_type = NetType::kWifi;
    std::string seen = string_field(rec, "lasttime");
    if (seen.empty()) seen = string_field(rec, "lastupdt");
    if (!seen.empty()) obs.seen_at = parse_timestamp(seen);
    page.observations.push_back(std::move(obs));
  }
  return page;
}

FetchResult fetch_networks(const WigleQuery& query, const WigleClientOptions& options) {
  const auto& box = query.bbox;
  if (!(box.lat_min < box.lat_max) || !(box.lon_min < box.lon_max) ||
      !is_valid({box.lat_min, box.lon_min}) || !is_valid({box.lat_max, box.lon_max})) {
    fail(ErrorKind::kInvalidParameter, "bbox must satisfy lat_min < lat_max and lon_min < lon_max");
  }
  if (query.max_results == 0) fail(ErrorKind::kInvalidParameter, "max_results must be positive");
  if (query.credentials.api_name.empty() || query.credentials.api_token.empty()) {
    fail(ErrorKind::kCredential, "WiGLE credentials are missing");
  }
  const auto sleep = options.sleep ? options.sleep : [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  httplib::Client client(options.base_url);
  if (!client.is_valid()) {
    fail(ErrorKind::kTransport, fmt::format("unsupported WiGLE base URL '{}'", options.base_url));
  }
  client.set_basic_auth(query.credentials.api_name, query.credentials.api_token);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);

  FetchResult out;
  std::string cursor;
  while (out.observations.size() < query.max_results) {
    const std::size_t want =
        std::min(options.page_size, query.max_results - out.observations.size());
    httplib::Params params{
        {"onlymine", "false"},
        {"latrange1", fmt::format("{}", box.lat_min)},
        {"latrange2", fmt::format("{}", box.lat_max)},
        {"longrange1", fmt::format("{}", box.lon_min)},
        {"longrange2", fmt::format("{}", box.lon_max)},
        {"resultsPerPage", std::to_string(want)},
    };
    if (!cursor.empty()) params.emplace("searchAfter", cursor);

    httplib::Result res;
    for (int attempt = 0;; ++attempt) {
      ++out.requests;
      res = client.Get("/api/v2/network/search", params, httplib::Headers{});
      if (!res) {
        fail(ErrorKind::kTransport,
             fmt::format("WiGLE request failed: {}", httplib::to_string(res.error())));
      }
      if (res->status != 429) break;
      if (attempt >= options.retry.max_retries) {
        const auto hint = res->get_header_value("Retry-After");
        fail(ErrorKind::kRateLimit,
             fmt::format("WiGLE rate limit persisted after {} retries{}", options.retry.max_retries,
                         hint.empty() ? std::string() : "; retry after " + hint + " s"));
      }
      const double scale = std::pow(options.retry.factor, attempt);
      sleep(std::chrono::milliseconds(
          static_cast<long long>(std::llround(static_cast<double>(options.retry.base.count()) * scale))));
      ++out.retries;
    }
    if (res->status == 401 || res->status == 403) {
      fail(ErrorKind::kCredential, fmt::format("WiGLE rejected credentials (HTTP {})", res->status));
    }
    if (res->status != 200) {
      fail(ErrorKind::kTransport, fmt::format("WiGLE returned HTTP {}", res->status));
    }

    auto page = parse_search_page(res->body, &cursor);
    out.skipped += page.skipped;
    const bool exhausted = page.observations.empty() && page.skipped == 0;
    for (auto& obs : page.observations) {
      if (out.observations.size() >= query.max_results) break;
      out.observations.push_back(std::move(obs));
    }
    if (exhausted || cursor.empty()) break;
  }
  return out;
}

}  // namespace wifimap
