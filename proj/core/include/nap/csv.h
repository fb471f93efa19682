// Copyright 2026 The NAP Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nap::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

// Splits one line on commas. Double-quoted fields may contain commas and
// escaped quotes (""). Surrounding whitespace is trimmed from unquoted fields.
std::vector<std::string> split_line(std::string_view line);

// Reads a UTF-8 CSV file with a mandatory header row. Blank lines are skipped.
Table read(const std::filesystem::path& path);

std::string quote_if_needed(std::string_view field);

// Shortest representation that parses back to the identical double.
std::string format_double(double v);

// Strict full-field parse; returns false on trailing garbage or empty input.
bool parse_double(std::string_view text, double& out);

}  // namespace nap::csv
