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

#ifndef WIFIMAP_CLI_HPP_
#define WIFIMAP_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace wifimap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point behind the `wifimap` binary. args[0] is the program name.
/// Warnings go to `err`; outputs are written only when a command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wifimap

#endif  // WIFIMAP_CLI_HPP_
