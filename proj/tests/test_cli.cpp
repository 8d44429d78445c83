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

#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "wifimap/cli.hpp"
#include "wifimap/config.hpp"
#include "wifimap/error.hpp"

using namespace wifimap;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wifimap");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("help exits 0 with usage text") {
  const auto r = cli({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("pipeline") != std::string::npos);
  CHECK(cli({"density", "--help"}).code == kExitOk);
}

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).code == kExitUsage);
  const auto unknown = cli({"density", "--frobnicate"});
  CHECK(unknown.code == kExitUsage);
  CHECK(cli({"launch"}).code == kExitUsage);
  const auto radii = cli({"density", "--radii", "0"});
  CHECK(radii.code == kExitUsage);
  CHECK(radii.err.find("radius") != std::string::npos);
  CHECK(cli({"predict", "--scenario", "median"}).code == kExitUsage);
  CHECK(cli({"ingest"}).code == kExitUsage);
}

TEST_CASE("data errors exit 2 and write nothing") {
  const auto dir = oracle::scratch_dir("cli-bad");
  { std::ofstream(dir / "broken.kml") << "<kml><Document><Placemark></Document></kml>"; }
  const auto r = cli({"ingest", "--input", (dir / "broken.kml").string(), "--out-dir", (dir / "out").string()});
  CHECK(r.code == kExitData);
  CHECK_FALSE(std::filesystem::exists(dir / "out" / "aps.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("ingest writes the canonical AP table and logs warnings") {
  const auto dir = oracle::scratch_dir("cli-ingest");
  const auto r = cli({"ingest", "--input", oracle::fixture("malformed.kml").string(),
                      oracle::fixture("malformed_wigle.csv").string(), "--out-dir", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning:") != std::string::npos);
  const auto aps = read_ap_csv(oracle::slurp(dir / "aps.csv"));
  CHECK(aps.size() == 6 + 14);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config file keys, relative paths and unknown keys") {
  const auto cfg = parse_config(
      "[paths]\nareas = data/areas.csv\nout_dir = /tmp/x\n"
      "[density]\nradii = 50, 150\n"
      "[predict]\nscenario = all\nseed = 9\n",
      "/base");
  CHECK(cfg.paths.areas == std::filesystem::path("/base/data/areas.csv"));
  CHECK(cfg.paths.out_dir == std::filesystem::path("/tmp/x"));
  CHECK(cfg.radii == std::vector<double>{50, 150});
  CHECK(cfg.scenarios.size() == 3);
  CHECK(cfg.seed == 9);
  for (const char* bad : {"[density]\nradius = 5\n", "[wigle]\napi_token = x\n", "[fetch]\napi_token = x\n",
                          "stray = 1\n", "[density]\nradii = 100, -1\n"}) {
    try {
      validate_config(parse_config(bad, "/base"));
      FAIL("expected an error for " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidParameter);
    }
  }
}

TEST_CASE("defaults") {
  const Config c;
  CHECK(c.radii == std::vector<double>{100, 200, 300});
  CHECK(c.thresholds.urban_per_km2 == 7959);
  CHECK(c.thresholds.suburban_per_km2 == 782);
  CHECK(c.filter.max_accuracy_m == 50);
  CHECK(c.national_business_adoption_target == 0.9);
  CHECK(c.coverage_fraction == 1.0);
}

TEST_CASE("flags override config values") {
  const auto dir = oracle::scratch_dir("cli-override");
  { std::ofstream(dir / "run.ini") << "[density]\nradii = 0\n"; }
  CHECK(cli({"density", "--config", (dir / "run.ini").string()}).code == kExitUsage);
  // the flag replaces the invalid file value, then the missing aps.csv is a data error
  const auto r = cli({"density", "--config", (dir / "run.ini").string(), "--radii", "100", "--out-dir", dir.string()});
  CHECK(r.code == kExitData);
  std::filesystem::remove_all(dir);
}

TEST_CASE("pipeline on the three-area fixture writes every output") {
  const auto dir = oracle::scratch_dir("cli-pipeline");
  const auto r = cli({"pipeline", "--config", oracle::fixture("pipeline/pipeline.ini").string(), "--out-dir",
                      dir.string()});
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  for (const char* name : {"aps.csv", "density.csv", "predicted.csv", "comparison.csv", "deciles.csv",
                           "validation.csv", "maup.csv", "report.md", "plots/validation.svg",
                           "plots/deciles_urban.svg", "plots/deciles_suburban.svg", "plots/deciles_rural.svg"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir / name), name);
  }
  const auto predicted = oracle::slurp(dir / "predicted.csv");
  CHECK(predicted.find("A01,urban") != std::string::npos);

  // the stage commands rebuild the same files from the same inputs
  const auto staged = oracle::scratch_dir("cli-staged");
  const auto cfg = oracle::fixture("pipeline/pipeline.ini").string();
  for (const char* stage : {"ingest", "density", "maup", "predict", "compare", "report"}) {
    const auto s = cli({stage, "--config", cfg, "--out-dir", staged.string()});
    REQUIRE_MESSAGE(s.code == kExitOk, stage << ": " << s.err);
  }
  CHECK(oracle::tree(staged) == oracle::tree(dir));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(staged);
}
