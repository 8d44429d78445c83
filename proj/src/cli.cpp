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

#include "wifimap/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wifimap/compare.hpp"
#include "wifimap/config.hpp"
#include "wifimap/csv.hpp"
#include "wifimap/density.hpp"
#include "wifimap/error.hpp"
#include "wifimap/ingest.hpp"
#include "wifimap/predict.hpp"
#include "wifimap/report.hpp"
#include "wifimap/wigle.hpp"

namespace wifimap {

namespace fs = std::filesystem;

namespace {

// A command-line flag and the config entry it overrides. Switches carry a
// fixed value instead of taking one.
struct FlagSpec {
  const char* name;
  const char* section;
  const char* key;
  const char* help;
  const char* switch_value = nullptr;
  bool multi = false;
};

const FlagSpec kFlags[] = {
    {"--out-dir", "paths", "out_dir", "root directory for all outputs"},
    {"--threads", "run", "threads", "worker thread cap (results do not depend on it)"},
    {"--input", "paths", "observations", "wardriving export(s), .csv or .kml", nullptr, true},
    {"--format", "ingest", "format", "input format: csv, kml or auto"},
    {"--max-accuracy", "ingest", "max_accuracy_m", "drop observations less accurate than this (m)"},
    {"--keep-zero-coords", "ingest", "drop_zero_coords", "keep (0,0) observations", "false"},
    {"--all-types", "ingest", "wifi_only", "keep Bluetooth/cell observations", "false"},
    {"--bbox", "fetch", "bbox", "lat_min,lon_min,lat_max,lon_max"},
    {"--max-results", "fetch", "max_results", "stop after this many networks"},
    {"--base-url", "fetch", "base_url", "WiGLE API root"},
    {"--page-size", "fetch", "page_size", "results per request"},
    {"--aps", "paths", "aps", "canonical AP CSV"},
    {"--premises", "paths", "premises", "premises CSV"},
    {"--areas", "paths", "areas", "statistical areas CSV"},
    {"--population", "paths", "population", "synthetic population CSV"},
    {"--tables", "paths", "tables", "adoption probability tables CSV"},
    {"--buildings", "paths", "buildings", "building AP counts CSV"},
    {"--density", "paths", "density", "density CSV"},
    {"--predicted", "paths", "predicted", "predicted CSV"},
    {"--radii", "density", "radii", "buffer radii in metres, comma separated"},
    {"--cell-sizes", "density", "maup_cell_sizes", "grid cell sizes in metres"},
    {"--offsets", "density", "maup_offsets", "grid offsets per cell size"},
    {"--scenario", "predict", "scenario", "low, baseline, high or all"},
    {"--seed", "predict", "seed", "random seed"},
    {"--national-target", "predict", "national_business_adoption_target",
     "national business adoption probability"},
    {"--size-multipliers", "predict", "size_multipliers", "five per-size adoption multipliers"},
    {"--business-mode", "predict", "business_mode", "expectation or draw"},
    {"--coverage-fraction", "predict", "coverage_fraction", "share of adopted floor area with APs"},
    {"--age-band-edges", "predict", "age_band_edges", "age band lower edges"},
    {"--urban-threshold", "predict", "urban_threshold", "urban density threshold (per km2)"},
    {"--suburban-threshold", "predict", "suburban_threshold", "suburban density threshold (per km2)"},
    {"--inflation-threshold", "compare", "inflation_threshold", "relative excess that flags inflation"},
    {"--inflation-radius", "compare", "inflation_radius_m", "radius tested for inflation (m)"},
    {"--validation-coverage", "compare", "validation_coverage_m2", "m2 per AP for building checks"},
};

const std::map<std::string, std::vector<std::string>>& command_flags() {
  static const auto* flags = new std::map<std::string, std::vector<std::string>>{
      {"ingest", {"--input", "--format", "--max-accuracy", "--keep-zero-coords", "--all-types"}},
      {"fetch",
       {"--bbox", "--max-results", "--base-url", "--page-size", "--max-accuracy",
        "--keep-zero-coords", "--all-types"}},
      {"density",
       {"--aps", "--premises", "--areas", "--radii", "--urban-threshold", "--suburban-threshold"}},
      {"maup", {"--aps", "--cell-sizes", "--offsets"}},
      {"predict",
       {"--areas", "--population", "--tables", "--premises", "--scenario", "--seed",
        "--national-target", "--size-multipliers", "--business-mode", "--coverage-fraction",
        "--age-band-edges", "--urban-threshold", "--suburban-threshold"}},
      {"compare",
       {"--aps", "--density", "--areas", "--predicted", "--buildings", "--radii",
        "--inflation-threshold", "--inflation-radius", "--validation-coverage", "--urban-threshold",
        "--suburban-threshold"}},
      {"report", {"--aps", "--density", "--inflation-threshold", "--inflation-radius"}},
  };
  return *flags;
}

const char* command_help(const std::string& name) {
  static const std::map<std::string, const char*> help = {
      {"ingest", "parse wardriving exports into the canonical AP CSV"},
      {"fetch", "download networks from the WiGLE API (credentials from the environment)"},
      {"density", "AP and premises density in circular buffers around every AP"},
      {"maup", "grid aggregation at several cell sizes and offsets"},
      {"predict", "national-statistics model of AP counts per area"},
      {"compare", "join observed and predicted densities; validate buildings"},
      {"report", "markdown summary and SVG plots from previous outputs"},
      {"pipeline", "run every stage and write all outputs"},
  };
  return help.at(name);
}

const FlagSpec& flag_spec(std::string_view name) {
  for (const auto& f : kFlags) {
    if (name == f.name) return f;
  }
  throw std::logic_error("unknown flag");
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err) {}

  void warn(const std::string& message) { err_ << "warning: " << message << '\n'; }

  void warn_all(const std::vector<std::string>& messages, std::string_view context) {
    constexpr std::size_t kShown = 20;
    for (std::size_t i = 0; i < messages.size() && i < kShown; ++i) {
      warn(fmt::format("{}: {}", context, messages[i]));
    }
    if (messages.size() > kShown) {
      warn(fmt::format("{}: {} more warnings suppressed", context, messages.size() - kShown));
    }
  }

 private:
  std::ostream& err_;
};

// Loaded or computed tables shared by the stages of one command.
struct Workspace {
  const Config& cfg;
  Logger& log;
  std::ostream& out;
  OutputSet outputs;

  std::optional<std::vector<ApRecord>> aps;
  std::optional<std::vector<Premise>> premises;
  std::optional<std::vector<StatArea>> areas;
  std::optional<std::vector<DensityRecord>> density;
  std::optional<std::vector<DecileSummary>> deciles;
  std::optional<MaupReport> maup;
  std::optional<std::vector<PredictionRow>> predicted;
  std::optional<std::vector<ComparisonRow>> comparisons;
  std::optional<std::vector<ValidationRow>> validations;
  std::optional<EdgeSummary> edges;
};

fs::path require_path(const std::optional<fs::path>& p, std::string_view what, std::string_view flag) {
  if (!p) fail(ErrorKind::kInvalidParameter, fmt::format("{} is required ({})", what, flag));
  return *p;
}

fs::path out_file(const Config& cfg, const std::optional<fs::path>& explicit_path,
                  std::string_view default_name) {
  return explicit_path ? *explicit_path : cfg.paths.out_dir / std::string(default_name);
}

const std::vector<ApRecord>& load_aps(Workspace& ws) {
  if (!ws.aps) ws.aps = read_ap_csv(read_file(out_file(ws.cfg, ws.cfg.paths.aps, "aps.csv")));
  return *ws.aps;
}

const std::vector<Premise>& load_premises(Workspace& ws) {
  if (!ws.premises) {
    ws.premises = ws.cfg.paths.premises ? read_premises_csv(read_file(*ws.cfg.paths.premises))
                                        : std::vector<Premise>{};
  }
  return *ws.premises;
}

const std::vector<StatArea>& load_areas(Workspace& ws) {
  if (!ws.areas) {
    ws.areas = read_areas_csv(read_file(require_path(ws.cfg.paths.areas, "areas CSV", "--areas")),
                              ws.cfg.thresholds);
  }
  return *ws.areas;
}

const std::vector<DensityRecord>& load_density(Workspace& ws) {
  if (!ws.density) {
    ws.density = read_density_csv(read_file(out_file(ws.cfg, ws.cfg.paths.density, "density.csv")));
  }
  return *ws.density;
}

const std::vector<PredictionRow>& load_predicted(Workspace& ws) {
  if (!ws.predicted) {
    ws.predicted =
        read_predicted_csv(read_file(out_file(ws.cfg, ws.cfg.paths.predicted, "predicted.csv")));
  }
  return *ws.predicted;
}

void stage_ingest(Workspace& ws) {
  const auto& cfg = ws.cfg;
  if (cfg.paths.observations.empty()) {
    fail(ErrorKind::kInvalidParameter, "ingest needs at least one --input file");
  }
  std::vector<RawObservation> all;
  for (const auto& file : cfg.paths.observations) {
    InputFormat format = cfg.format;
    if (format == InputFormat::kAuto) {
      auto ext = file.extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext == ".kml") {
        format = InputFormat::kKml;
      } else if (ext == ".csv") {
        format = InputFormat::kCsv;
      } else {
        fail(ErrorKind::kInvalidParameter,
             fmt::format("cannot infer format of '{}'; pass --format", file.string()));
      }
    }
    const auto text = read_file(file);
    auto report = format == InputFormat::kKml ? parse_kml(text) : parse_wigle_csv(text);
    ws.log.warn_all(report.warnings, file.filename().string());
    ws.out << fmt::format("{}: {} observations, {} skipped\n", file.string(),
                          report.observations.size(), report.skipped);
    all.insert(all.end(), std::make_move_iterator(report.observations.begin()),
               std::make_move_iterator(report.observations.end()));
  }
  ws.aps = deduplicate(all, cfg.filter);
  ws.out << fmt::format("{} unique access points\n", ws.aps->size());
}

void stage_fetch(Workspace& ws) {
  const auto& cfg = ws.cfg;
  if (!cfg.fetch_bbox) fail(ErrorKind::kInvalidParameter, "fetch needs --bbox");
  WigleQuery query{*cfg.fetch_bbox, cfg.fetch_max_results, WigleCredentials::from_environment()};
  WigleClientOptions options;
  options.base_url = cfg.wigle_base_url;
  options.page_size = cfg.wigle_page_size;
  auto result = fetch_networks(query, options);
  if (result.skipped) ws.log.warn(fmt::format("fetch: {} malformed records skipped", result.skipped));
  ws.aps = deduplicate(result.observations, cfg.filter);
  ws.out << fmt::format("fetched {} records in {} requests, {} unique access points\n",
                        result.observations.size(), result.requests, ws.aps->size());
}

void stage_density(Workspace& ws, bool want_deciles) {
  const auto& aps = load_aps(ws);
  const auto& premises = load_premises(ws);
  ws.density = compute_buffer_densities(aps, premises, ws.cfg.radii, ws.cfg.threads);
  const auto flags = edge_flags(*ws.density, aps);
  ws.edges = EdgeSummary{flags.size(),
                         static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true))};
  if (want_deciles && ws.cfg.paths.areas) {
    const auto geotypes = geotypes_by_bssid(aps, load_areas(ws));
    auto result = decile_summary(*ws.density, [&](std::string_view bssid) -> std::optional<Geotype> {
      auto it = geotypes.find(bssid);
      if (it == geotypes.end()) return std::nullopt;
      return it->second;
    });
    ws.log.warn_all(result.warnings, "deciles");
    ws.deciles = std::move(result.summaries);
  } else if (want_deciles) {
    ws.log.warn("deciles skipped: no areas CSV to assign geotypes");
  }
  ws.out << fmt::format("{} density records ({} beyond the data bounding box)\n", ws.density->size(),
                        ws.edges->beyond_bounds);
}

void stage_maup(Workspace& ws) {
  const auto points = locations_of(load_aps(ws));
  ws.maup = maup_experiment(points, ws.cfg.maup_cell_sizes, ws.cfg.maup_offsets);
  ws.out << fmt::format("{} grid specs over {} points\n", ws.maup->rows.size(), ws.maup->total_points);
}

void stage_predict(Workspace& ws) {
  const auto& cfg = ws.cfg;
  const auto& areas = load_areas(ws);
  const auto individuals =
      read_population_csv(read_file(require_path(cfg.paths.population, "population CSV", "--population")));
  const auto tables = read_probability_tables_csv(
      read_file(require_path(cfg.paths.tables, "probability tables CSV", "--tables")),
      cfg.age_band_edges);
  PredictOptions options;
  options.scenario = cfg.scenarios.front();
  options.seed = cfg.seed;
  options.national_business_adoption_target = cfg.national_business_adoption_target;
  options.size_multipliers = cfg.size_multipliers;
  options.business_mode = cfg.business_mode;
  options.coverage_fraction = cfg.coverage_fraction;
  options.threads = cfg.threads;
  const auto predicted =
      predict_all({areas, individuals, load_premises(ws), &tables}, options);
  ws.predicted = prediction_rows(predicted, cfg.scenarios, cfg.seed);
  ws.out << fmt::format("predicted {} areas\n", predicted.size());
}

void stage_compare(Workspace& ws) {
  const auto& cfg = ws.cfg;
  const auto& aps = load_aps(ws);
  const auto& areas = load_areas(ws);
  const auto ap_area = assign_aps_to_areas(aps, areas);
  ws.comparisons =
      join_observed_predicted(load_density(ws), ap_area, load_predicted(ws), cfg.radii, cfg.inflation);
  if (cfg.paths.buildings) {
    const auto buildings = read_buildings_csv(read_file(*cfg.paths.buildings));
    auto result = validate_buildings(buildings, cfg.validation_coverage_m2);
    ws.log.warn_all(result.warnings, "buildings");
    ws.validations = std::move(result.rows);
    ws.out << fmt::format("validated {} buildings\n", ws.validations->size());
  }
  ws.out << fmt::format("{} comparison rows\n", ws.comparisons->size());
}

ReportInputs report_inputs(const Workspace& ws) {
  ReportInputs in;
  in.comparisons = ws.comparisons;
  in.deciles = ws.deciles;
  in.validations = ws.validations;
  in.maup = ws.maup;
  in.edges = ws.edges;
  in.inflation = ws.cfg.inflation;
  return in;
}

// Picks up whatever earlier commands left in the output directory.
void load_previous_outputs(Workspace& ws) {
  const auto& dir = ws.cfg.paths.out_dir;
  auto maybe = [&](std::string_view name) -> std::optional<std::string> {
    const auto p = dir / std::string(name);
    if (!fs::exists(p)) return std::nullopt;
    return read_file(p);
  };
  if (auto t = maybe("comparison.csv")) ws.comparisons = read_comparison_csv(*t);
  if (auto t = maybe("deciles.csv")) ws.deciles = read_decile_csv(*t);
  if (auto t = maybe("validation.csv")) ws.validations = read_validation_csv(*t);
  if (auto t = maybe("maup.csv")) ws.maup = read_maup_csv(*t);
  const auto aps_path = out_file(ws.cfg, ws.cfg.paths.aps, "aps.csv");
  const auto density_path = out_file(ws.cfg, ws.cfg.paths.density, "density.csv");
  if (fs::exists(aps_path) && fs::exists(density_path)) {
    const auto flags = edge_flags(load_density(ws), load_aps(ws));
    ws.edges = EdgeSummary{flags.size(),
                           static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true))};
  }
}

void run_command(const std::string& command, Workspace& ws) {
  auto& o = ws.outputs;
  if (command == "ingest" || command == "fetch") {
    command == "ingest" ? stage_ingest(ws) : stage_fetch(ws);
    o.add("aps.csv", write_ap_csv(*ws.aps));
  } else if (command == "density") {
    stage_density(ws, true);
    o.add("density.csv", write_density_csv(*ws.density));
    if (ws.deciles) o.add("deciles.csv", write_decile_csv(*ws.deciles));
  } else if (command == "maup") {
    stage_maup(ws);
    o.add("maup.csv", write_maup_csv(*ws.maup));
  } else if (command == "predict") {
    stage_predict(ws);
    o.add("predicted.csv", write_predicted_csv(*ws.predicted));
  } else if (command == "compare") {
    stage_compare(ws);
    o.add("comparison.csv", write_comparison_csv(*ws.comparisons));
    if (ws.validations) o.add("validation.csv", write_validation_csv(*ws.validations));
  } else if (command == "report") {
    load_previous_outputs(ws);
    ws.outputs = emit_report(report_inputs(ws));
  } else if (command == "pipeline") {
    if (!ws.cfg.paths.observations.empty()) {
      stage_ingest(ws);
    } else if (ws.cfg.fetch_bbox) {
      stage_fetch(ws);
    }
    stage_density(ws, true);
    stage_maup(ws);
    stage_predict(ws);
    stage_compare(ws);
    o.add("aps.csv", write_ap_csv(*ws.aps));
    o.add("density.csv", write_density_csv(*ws.density));
    o.add("predicted.csv", write_predicted_csv(*ws.predicted));
    auto report = emit_report(report_inputs(ws));
    for (const auto& [path, content] : report.files()) o.add(path, content);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wifimap: wardriving density, predictive AP model and comparison toolkit", "wifimap"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "show help for every command");

  std::optional<std::string> config_file;
  // Values are kept as text and applied through the config setters, in
  // command-line order, after the config file.
  std::map<std::string, std::vector<std::string>> flag_values;
  std::map<std::string, bool> switch_values;

  auto add_flag = [&](CLI::App& sub, const FlagSpec& f) {
    if (f.switch_value) {
      sub.add_flag(f.name, switch_values[f.name], f.help);
    } else if (f.multi) {
      sub.add_option(f.name, flag_values[f.name], f.help)->expected(1, -1)->type_name("PATH");
    } else {
      sub.add_option(f.name, flag_values[f.name], f.help)->expected(1)->multi_option_policy(
          CLI::MultiOptionPolicy::TakeLast);
    }
  };

  std::vector<std::string> names{"ingest", "fetch", "density", "maup", "predict", "compare", "report",
                                 "pipeline"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, command_help(name));
    sub->add_option("--config", config_file, "configuration file (INI sections)");
    std::vector<std::string> flags{"--out-dir", "--threads"};
    if (name == "pipeline") {
      for (const auto& f : kFlags) {
        if (std::find(flags.begin(), flags.end(), f.name) == flags.end()) {
          flags.push_back(f.name);
        }
      }
    } else {
      const auto& extra = command_flags().at(name);
      flags.insert(flags.end(), extra.begin(), extra.end());
    }
    for (const auto& f : flags) add_flag(*sub, flag_spec(f));
  }

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  Logger log(err);
  Config cfg;
  try {
    if (config_file) cfg = load_config(*config_file);
    for (const auto& f : kFlags) {
      if (f.switch_value) {
        if (auto it = switch_values.find(f.name); it != switch_values.end() && it->second) {
          apply_setting(cfg, f.section, f.key, f.switch_value);
        }
        continue;
      }
      auto it = flag_values.find(f.name);
      if (it == flag_values.end() || it->second.empty()) continue;
      std::string joined;
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (i) joined += ',';
        joined += it->second[i];
      }
      apply_setting(cfg, f.section, f.key, f.multi ? joined : it->second.back());
    }
    validate_config(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Workspace ws{cfg, log, out, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    run_command(command, ws);
    ws.outputs.commit(cfg.paths.out_dir);
    for (const auto& [path, content] : ws.outputs.files()) {
      out << "wrote " << (cfg.paths.out_dir / path).string() << '\n';
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::kInvalidParameter ? kExitUsage : kExitData;
  }
  return kExitOk;
}

}  // namespace wifimap
