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

#ifndef WIFIMAP_RNG_HPP_
#define WIFIMAP_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace wifimap {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Counter-based stream: draw i depends only on (seed, keys, i), so results
// do not depend on iteration order or thread scheduling.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::initializer_list<std::string_view> keys) {
    std::uint64_t k = splitmix64(seed);
    for (auto key : keys) k = splitmix64(k ^ fnv1a64(key));
    key_ = k;
  }

  std::uint64_t bits(std::uint64_t index) const {
    return splitmix64(key_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_ = 0;
};

}  // namespace wifimap

#endif  // WIFIMAP_RNG_HPP_
