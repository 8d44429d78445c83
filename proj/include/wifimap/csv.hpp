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

#ifndef WIFIMAP_CSV_HPP_
#define WIFIMAP_CSV_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wifimap {

// Parsed RFC 4180 text. Row i started on source line line_of[i] (1-based);
// the header is not part of rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_of;

  std::optional<std::size_t> column(std::string_view name) const;
  // kFormat error naming the missing column.
  std::size_t require_column(std::string_view name) const;
};

/// Splits text into records. Quoted fields may hold commas, quotes ("")
/// and newlines. Blank lines are skipped. Unterminated quotes raise kParse.
std::vector<std::vector<std::string>> split_csv_records(
    std::string_view text, std::vector<std::size_t>* line_of = nullptr);

/// First record becomes the header. Empty text raises kFormat.
CsvTable parse_csv(std::string_view text);

std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);
  explicit CsvWriter(const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  void append(const std::vector<std::string>& fields);

  std::size_t width_;
  std::string out_;
};

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::string_view trim(std::string_view s);

/// Shortest representation that parses back to the same double.
std::string format_exact(double v);
/// Fixed six decimals.
std::string format_fixed(double v);

std::string read_file(const std::filesystem::path& path);

// Collects output files in memory and writes them only on commit(). Each
// file goes to a temporary sibling first and is renamed into place, so a
// failure never leaves a truncated artifact behind.
class OutputSet {
 public:
  void add(std::filesystem::path relative, std::string content);
  bool empty() const { return files_.empty(); }
  const std::vector<std::pair<std::filesystem::path, std::string>>& files() const {
    return files_;
  }
  void commit(const std::filesystem::path& root) const;

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace wifimap

#endif  // WIFIMAP_CSV_HPP_
