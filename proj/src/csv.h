/*
 * Copyright 2026 The vaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Minimal RFC 4180 reader/writer. Quoted fields may contain commas, doubled
// quotes and newlines. A UTF-8 byte-order mark on the first line is dropped.

#ifndef VAUDIT_SRC_CSV_H_
#define VAUDIT_SRC_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vaudit::csv {

using Row = std::vector<std::string>;

// Blank lines are skipped. Throws Error(kParseError) on an unterminated
// quoted field.
std::vector<Row> Parse(std::string_view text);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& content);

// Quotes the field when it contains a comma, quote or line break.
std::string Escape(std::string_view field);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace vaudit::csv

#endif  // VAUDIT_SRC_CSV_H_
