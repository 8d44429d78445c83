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

#include "wifimap/error.hpp"

namespace wifimap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidCoordinate: return "invalid-coordinate";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kProjectionDomain: return "projection-domain";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kTableCoverage: return "table-coverage";
    case ErrorKind::kDisaggregation: return "disaggregation";
    case ErrorKind::kCalibration: return "calibration";
    case ErrorKind::kCredential: return "credential";
    case ErrorKind::kRateLimit: return "rate-limit";
    case ErrorKind::kTransport: return "transport";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace wifimap
