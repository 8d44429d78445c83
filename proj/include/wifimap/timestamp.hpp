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

#ifndef WIFIMAP_TIMESTAMP_HPP_
#define WIFIMAP_TIMESTAMP_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace wifimap {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DD HH:MM:SS" and ISO-8601 "YYYY-MM-DDTHH:MM:SS" with an
// optional fractional part (truncated) and an optional Z / +HH:MM / -HHMM
// zone. Values without a zone are taken as UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

}  // namespace wifimap

#endif  // WIFIMAP_TIMESTAMP_HPP_
