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

#ifndef WIFIMAP_WIGLE_HPP_
#define WIFIMAP_WIGLE_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wifimap/geo.hpp"
#include "wifimap/ingest.hpp"

namespace wifimap {

struct WigleCredentials {
  std::string api_name;
  std::string api_token;

  /// Reads WIGLE_API_NAME / WIGLE_API_TOKEN. kCredential if either is unset.
  static WigleCredentials from_environment();
};

struct WigleQuery {
  BoundingBox bbox;
  std::size_t max_results = 100;
  WigleCredentials credentials;
};

// Delay before retry k (0-based) is base * factor^k.
struct RetryPolicy {
  std::chrono::milliseconds base{1000};
  double factor = 2.0;
  int max_retries = 5;
};

struct WigleClientOptions {
  std::string base_url = "https://api.wigle.net";
  std::size_t page_size = 100;
  RetryPolicy retry;
  std::chrono::seconds timeout{30};
  // Replaceable for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct FetchResult {
  std::vector<RawObservation> observations;
  std::size_t skipped = 0;
  std::size_t requests = 0;
  std::size_t retries = 0;
};

/// Maps one network-search response body to observations (records that
/// fail the observation invariants are skipped). Sets *search_after to the
/// continuation token, or empty when the response has none.
FetchResult parse_search_page(std::string_view body, std::string* search_after);

/// Pages through the v2 network search endpoint one request at a time until
/// max_results records or exhaustion.
///
/// Errors: kCredential on 401/403 or missing credentials, kRateLimit once
/// 429 persists past the retry budget (message carries any Retry-After),
/// kTransport for connection failures and other HTTP statuses, kFormat for
/// undecodable bodies.
FetchResult fetch_networks(const WigleQuery& query, const WigleClientOptions& options = {});

}  // namespace wifimap

#endif  // WIFIMAP_WIGLE_HPP_
