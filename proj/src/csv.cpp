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

#include "wifimap/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "wifimap/error.hpp"

namespace wifimap {

namespace fs = std::filesystem;

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  fail(ErrorKind::kFormat, fmt::format("missing CSV column '{}'", name));
}

std::vector<std::vector<std::string>> split_csv_records(
    std::string_view text, std::vector<std::size_t>* line_of) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    const bool blank = record.empty() && field.empty() && !field_started;
    if (!blank) {
      record.push_back(std::move(field));
      records.push_back(std::move(record));
      if (line_of) line_of->push_back(record_line);
    }
    record.clear();
    field.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        if (record.empty() && field.empty() && !field_started) record_line = line;
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    fail(ErrorKind::kParse,
         fmt::format("unterminated quoted field starting on line {}", record_line));
  }
  end_record();
  return records;
}

CsvTable parse_csv(std::string_view text) {
  // Tolerate a UTF-8 byte-order mark.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  CsvTable table;
  std::vector<std::size_t> lines;
  auto records = split_csv_records(text, &lines);
  if (records.empty()) fail(ErrorKind::kFormat, "empty CSV input (no header)");
  table.header = std::move(records.front());
  for (auto& h : table.header) h = std::string(trim(h));
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  table.line_of.assign(lines.begin() + 1, lines.end());
  return table;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header)
    : width_(header.size()) {
  append(std::vector<std::string>(header.begin(), header.end()));
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : width_(header.size()) {
  append(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) {
    fail(ErrorKind::kInvalidParameter,
         fmt::format("CSV row has {} fields, header has {}", fields.size(), width_));
  }
  append(fields);
}

void CsvWriter::append(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.push_back(',');
    out_ += csv_escape(fields[i]);
  }
  out_ += "\r\n";
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_exact(double v) { return fmt::format("{}", v); }

std::string format_fixed(double v) { return fmt::format("{:.6f}", v); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::kIo, fmt::format("error reading '{}'", path.string()));
  return std::move(ss).str();
}

void OutputSet::add(fs::path relative, std::string content) {
  files_.emplace_back(std::move(relative), std::move(content));
}

void OutputSet::commit(const fs::path& root) const {
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&] {
    std::error_code ignored;
    for (const auto& [tmp, dst] : staged) fs::remove(tmp, ignored);
  };
  try {
    for (const auto& [rel, content] : files_) {
      const fs::path dst = root / rel;
      std::error_code ec;
      fs::create_directories(dst.parent_path(), ec);
      if (ec) {
        fail(ErrorKind::kIo, fmt::format("cannot create directory '{}': {}",
                                         dst.parent_path().string(), ec.message()));
      }
      fs::path tmp = dst;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorKind::kIo, fmt::format("cannot write '{}'", dst.string()));
      staged.emplace_back(tmp, dst);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) fail(ErrorKind::kIo, fmt::format("error writing '{}'", dst.string()));
    }
  } catch (...) {
    discard();
    throw;
  }
  for (const auto& [tmp, dst] : staged) {
    std::error_code ec;
    fs::rename(tmp, dst, ec);
    if (ec) {
      discard();
      fail(ErrorKind::kIo, fmt::format("cannot move '{}' into place: {}",
                                       dst.string(), ec.message()));
    }
  }
}

}  // namespace wifimap
