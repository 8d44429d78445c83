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

#ifndef WIFIMAP_CONFIG_HPP_
#define WIFIMAP_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wifimap/compare.hpp"
#include "wifimap/geo.hpp"
#include "wifimap/ingest.hpp"
#include "wifimap/predict.hpp"

namespace wifimap {

enum class InputFormat { kAuto, kCsv, kKml };

// Every run parameter. Defaults are the model's published constants; the
// file format and key list are documented in README.md.
struct Config {
  struct Paths {
    std::vector<std::filesystem::path> observations;
    std::optional<std::filesystem::path> aps;
    std::optional<std::filesystem::path> premises;
    std::optional<std::filesystem::path> areas;
    std::optional<std::filesystem::path> population;
    std::optional<std::filesystem::path> tables;
    std::optional<std::filesystem::path> buildings;
    std::optional<std::filesystem::path> density;
    std::optional<std::filesystem::path> predicted;
    std::filesystem::path out_dir = "out";
  } paths;

  InputFormat format = InputFormat::kAuto;
  FilterPolicy filter;

  std::vector<double> radii{100.0, 200.0, 300.0};
  std::vector<double> maup_cell_sizes{250.0, 500.0, 1000.0};
  std::size_t maup_offsets = 3;

  GeotypeThresholds thresholds;
  std::vector<Scenario> scenarios{Scenario::kBaseline};
  std::uint64_t seed = 0;
  double national_business_adoption_target = 0.9;
  PerCategory<double> size_multipliers{1.0, 1.0, 1.0, 1.0, 1.0};
  BusinessMode business_mode = BusinessMode::kExpectation;
  double coverage_fraction = 1.0;
  std::vector<double> age_band_edges;

  InflationRule inflation;
  double validation_coverage_m2 = 200.0;

  std::optional<BoundingBox> fetch_bbox;
  std::size_t fetch_max_results = 1000;
  std::string wigle_base_url = "https://api.wigle.net";
  std::size_t wigle_page_size = 100;

  unsigned threads = 1;
};

/// Parses the INI-style text. Relative paths resolve against `base_dir`.
/// Unknown sections or keys, and malformed values, raise kInvalidParameter.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir,
                    Config base = {});
Config load_config(const std::filesystem::path& file, Config base = {});

/// Applies one `[section] key = value` entry; the command line routes its
/// flags through here too.
void apply_setting(Config& config, std::string_view section, std::string_view key,
                   std::string_view value, const std::filesystem::path& base_dir = {});

/// Checks cross-field constraints (positive radii, probability ranges,
/// threshold order, ...). Throws kInvalidParameter.
void validate_config(const Config& config);

// Value parsers shared with the command line.
std::vector<double> parse_number_list(std::string_view text, std::string_view key);
bool parse_bool(std::string_view text, std::string_view key);
std::vector<Scenario> parse_scenarios(std::string_view text);
BusinessMode parse_business_mode(std::string_view text);
InputFormat parse_input_format(std::string_view text);
BoundingBox parse_bbox(std::string_view text);

}  // namespace wifimap

#endif  // WIFIMAP_CONFIG_HPP_
