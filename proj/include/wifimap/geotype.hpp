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

#ifndef WIFIMAP_GEOTYPE_HPP_
#define WIFIMAP_GEOTYPE_HPP_

#include <optional>
#include <string_view>

namespace wifimap {

/// Settlement class by population density.
enum class Geotype { kUrban, kSuburban, kRural };

inline constexpr Geotype kAllGeotypes[] = {Geotype::kUrban, Geotype::kSuburban, Geotype::kRural};

// Lower-case labels ("urban", "suburban", "rural"); these are also the
// settlement keys of the adoption tables.
const char* to_string(Geotype g);
std::optional<Geotype> geotype_from_string(std::string_view text);

}  // namespace wifimap

#endif  // WIFIMAP_GEOTYPE_HPP_
