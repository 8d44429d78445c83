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

#include "wifimap/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "wifimap/csv.hpp"
#include "wifimap/error.hpp"

namespace wifimap {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  fail(ErrorKind::kInvalidParameter, fmt::format("{}: '{}' is not {}", key, value, what));
}

double parse_number(std::string_view text, std::string_view key) {
  const auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) bad_value(key, text, "a finite number");
  return *v;
}

std::uint64_t parse_seed(std::string_view text, std::string_view key) {
  const auto v = parse_int(text);
  if (!v || *v < 0) bad_value(key, text, "a non-negative integer");
  return static_cast<std::uint64_t>(*v);
}

std::size_t parse_count(std::string_view text, std::string_view key) {
  const auto v = parse_int(text);
  if (!v || *v < 1) bad_value(key, text, "a positive integer");
  return static_cast<std::size_t>(*v);
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number(trim(rest.substr(0, comma)), key));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

bool parse_bool(std::string_view text, std::string_view key) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad_value(key, text, "a boolean");
}

std::vector<Scenario> parse_scenarios(std::string_view text) {
  if (trim(text) == "all") return {kAllScenarios.begin(), kAllScenarios.end()};
  if (auto s = scenario_from_string(text)) return {*s};
  bad_value("scenario", text, "low, baseline, high or all");
}

BusinessMode parse_business_mode(std::string_view text) {
  const auto t = trim(text);
  if (t == "expectation") return BusinessMode::kExpectation;
  if (t == "draw") return BusinessMode::kDraw;
  bad_value("business_mode", text, "expectation or draw");
}

InputFormat parse_input_format(std::string_view text) {
  const auto t = trim(text);
  if (t == "auto") return InputFormat::kAuto;
  if (t == "csv") return InputFormat::kCsv;
  if (t == "kml") return InputFormat::kKml;
  bad_value("format", text, "csv, kml or auto");
}

BoundingBox parse_bbox(std::string_view text) {
  const auto v = parse_number_list(text, "bbox");
  if (v.size() != 4) bad_value("bbox", text, "lat_min,lon_min,lat_max,lon_max");
  return {v[0], v[1], v[2], v[3]};
}

void apply_setting(Config& cfg, std::string_view section, std::string_view key,
                   std::string_view value, const fs::path& base_dir) {
  auto path = [&](std::string_view v) { return base_dir / fs::path(std::string(trim(v))); };
  using Setter = std::function<void(std::string_view)>;
  const std::map<std::string, std::map<std::string, Setter>> keys = {
      {"paths",
       {
           {"observations",
            [&](std::string_view v) {
              cfg.paths.observations.clear();
              std::string_view rest = v;
              while (!trim(rest).empty()) {
                const auto comma = rest.find(',');
                cfg.paths.observations.push_back(path(rest.substr(0, comma)));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
              }
            }},
           {"aps", [&](std::string_view v) { cfg.paths.aps = path(v); }},
           {"premises", [&](std::string_view v) { cfg.paths.premises = path(v); }},
           {"areas", [&](std::string_view v) { cfg.paths.areas = path(v); }},
           {"population", [&](std::string_view v) { cfg.paths.population = path(v); }},
           {"tables", [&](std::string_view v) { cfg.paths.tables = path(v); }},
           {"buildings", [&](std::string_view v) { cfg.paths.buildings = path(v); }},
           {"density", [&](std::string_view v) { cfg.paths.density = path(v); }},
           {"predicted", [&](std::string_view v) { cfg.paths.predicted = path(v); }},
           {"out_dir", [&](std::string_view v) { cfg.paths.out_dir = path(v); }},
       }},
      {"ingest",
       {
           {"format", [&](std::string_view v) { cfg.format = parse_input_format(v); }},
           {"max_accuracy_m",
            [&](std::string_view v) { cfg.filter.max_accuracy_m = parse_number(v, "max_accuracy_m"); }},
           {"drop_zero_coords",
            [&](std::string_view v) { cfg.filter.drop_zero_coords = parse_bool(v, "drop_zero_coords"); }},
           {"wifi_only", [&](std::string_view v) { cfg.filter.wifi_only = parse_bool(v, "wifi_only"); }},
       }},
      {"density",
       {
           {"radii", [&](std::string_view v) { cfg.radii = parse_number_list(v, "radii"); }},
           {"maup_cell_sizes",
            [&](std::string_view v) { cfg.maup_cell_sizes = parse_number_list(v, "maup_cell_sizes"); }},
           {"maup_offsets", [&](std::string_view v) { cfg.maup_offsets = parse_count(v, "maup_offsets"); }},
       }},
      {"predict",
       {
           {"scenario", [&](std::string_view v) { cfg.scenarios = parse_scenarios(v); }},
           {"seed", [&](std::string_view v) { cfg.seed = parse_seed(v, "seed"); }},
           {"national_business_adoption_target",
            [&](std::string_view v) {
              cfg.national_business_adoption_target =
                  parse_number(v, "national_business_adoption_target");
            }},
           {"size_multipliers",
            [&](std::string_view v) {
              const auto m = parse_number_list(v, "size_multipliers");
              if (m.size() != kNumSizeCategories) bad_value("size_multipliers", v, "five numbers");
              std::copy(m.begin(), m.end(), cfg.size_multipliers.begin());
            }},
           {"business_mode", [&](std::string_view v) { cfg.business_mode = parse_business_mode(v); }},
           {"coverage_fraction",
            [&](std::string_view v) { cfg.coverage_fraction = parse_number(v, "coverage_fraction"); }},
           {"age_band_edges",
            [&](std::string_view v) { cfg.age_band_edges = parse_number_list(v, "age_band_edges"); }},
           {"urban_threshold",
            [&](std::string_view v) { cfg.thresholds.urban_per_km2 = parse_number(v, "urban_threshold"); }},
           {"suburban_threshold",
            [&](std::string_view v) {
              cfg.thresholds.suburban_per_km2 = parse_number(v, "suburban_threshold");
            }},
       }},
      {"compare",
       {
           {"inflation_threshold",
            [&](std::string_view v) { cfg.inflation.threshold = parse_number(v, "inflation_threshold"); }},
           {"inflation_radius_m",
            [&](std::string_view v) { cfg.inflation.radius_m = parse_number(v, "inflation_radius_m"); }},
           {"validation_coverage_m2",
            [&](std::string_view v) {
              cfg.validation_coverage_m2 = parse_number(v, "validation_coverage_m2");
            }},
       }},
      {"fetch",
       {
           {"bbox", [&](std::string_view v) { cfg.fetch_bbox = parse_bbox(v); }},
           {"max_results",
            [&](std::string_view v) { cfg.fetch_max_results = parse_count(v, "max_results"); }},
           {"base_url", [&](std::string_view v) { cfg.wigle_base_url = std::string(trim(v)); }},
           {"page_size", [&](std::string_view v) { cfg.wigle_page_size = parse_count(v, "page_size"); }},
       }},
      {"run",
       {
           {"threads",
            [&](std::string_view v) { cfg.threads = static_cast<unsigned>(parse_count(v, "threads")); }},
       }},
  };

  auto sec = keys.find(std::string(section));
  if (sec == keys.end()) {
    fail(ErrorKind::kInvalidParameter, fmt::format("unknown config section [{}]", section));
  }
  auto setter = sec->second.find(std::string(key));
  if (setter == sec->second.end()) {
    fail(ErrorKind::kInvalidParameter, fmt::format("unknown config key [{}] {}", section, key));
  }
  setter->second(value);
}

Config parse_config(std::string_view text, const fs::path& base_dir, Config cfg) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("config line {}: {}", e.line(), e.message()));
  }
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) {
      fail(ErrorKind::kInvalidParameter,
           fmt::format("config entry '{}' is not a [section] with keys", section));
    }
    for (const auto& [key, value] : entries) {
      apply_setting(cfg, section, key, value.data(), base_dir);
    }
  }
  return cfg;
}

Config load_config(const fs::path& file, Config base) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error& e) {
    fail(ErrorKind::kInvalidParameter, e.what());
  }
  return parse_config(text, file.parent_path(), std::move(base));
}

void validate_config(const Config& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) fail(ErrorKind::kInvalidParameter, message);
  };
  validate_radii(c.radii);
  require(c.filter.max_accuracy_m > 0.0, "max_accuracy_m must be positive");
  require(c.maup_cell_sizes.size() >= 2, "maup_cell_sizes needs at least two sizes");
  for (double s : c.maup_cell_sizes) require(s > 0.0, "maup_cell_sizes must be positive");
  require(c.maup_offsets >= 2, "maup_offsets must be at least 2");
  require(c.thresholds.suburban_per_km2 > 0.0 &&
              c.thresholds.urban_per_km2 > c.thresholds.suburban_per_km2,
          "thresholds must satisfy 0 < suburban_threshold < urban_threshold");
  require(!c.scenarios.empty(), "at least one scenario is required");
  require(c.national_business_adoption_target >= 0.0 && c.national_business_adoption_target <= 1.0,
          "national_business_adoption_target must be in [0,1]");
  for (double m : c.size_multipliers) require(m >= 0.0, "size_multipliers must be >= 0");
  require(c.coverage_fraction >= 0.0 && c.coverage_fraction <= 1.0,
          "coverage_fraction must be in [0,1]");
  if (!c.age_band_edges.empty()) age_bands_from_edges(c.age_band_edges);
  require(c.inflation.threshold >= 0.0, "inflation_threshold must be >= 0");
  require(c.inflation.radius_m > 0.0, "inflation_radius_m must be positive");
  require(c.validation_coverage_m2 > 0.0, "validation_coverage_m2 must be positive");
  require(c.threads >= 1, "threads must be at least 1");
  require(c.seed <= static_cast<std::uint64_t>(INT64_MAX), "seed must fit in a signed 64-bit integer");
}

}  // namespace wifimap
