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

#ifndef WIFIMAP_ERROR_HPP_
#define WIFIMAP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wifimap {

enum class ErrorKind {
  kInvalidCoordinate,
  kInvalidParameter,
  kProjectionDomain,
  kParse,
  kFormat,
  kTableCoverage,
  kDisaggregation,
  kCalibration,
  kCredential,
  kRateLimit,
  kTransport,
  kIo,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this one exception type; the
// kind decides how the CLI maps it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace wifimap

#endif  // WIFIMAP_ERROR_HPP_
