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

#ifndef WIFIMAP_REPORT_HPP_
#define WIFIMAP_REPORT_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "wifimap/compare.hpp"
#include "wifimap/csv.hpp"
#include "wifimap/density.hpp"

namespace wifimap {

struct EdgeSummary {
  std::size_t records = 0;
  std::size_t beyond_bounds = 0;
};

// Any subset may be absent; absent sections are rendered as "no data".
struct ReportInputs {
  std::optional<std::vector<ComparisonRow>> comparisons;
  std::optional<std::vector<DecileSummary>> deciles;
  std::optional<std::vector<ValidationRow>> validations;
  std::optional<MaupReport> maup;
  std::optional<EdgeSummary> edges;
  InflationRule inflation;
};

/// report.md, the CSVs for every present input and plots/*.svg. Output is
/// a pure function of the inputs.
OutputSet emit_report(const ReportInputs& inputs);

}  // namespace wifimap

#endif  // WIFIMAP_REPORT_HPP_
