// Copyright 2026 The adeval Authors
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

#ifndef ADEVAL_IO_UTIL_HPP_
#define ADEVAL_IO_UTIL_HPP_

#include <filesystem>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

namespace adeval::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Parses a whole-file JSON document; errors carry the file name.
json parse_json_file(const std::filesystem::path& path);

// Calls `fn(line_number, object)` for each non-blank line. Lines are 1-based;
// parse errors carry "file:line".
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const json&)>& fn);

// Required-field accessors with "file:record" context in error messages.
std::string require_string(const json& obj, const char* field,
                           const std::string& where);
double require_number(const json& obj, const char* field,
                      const std::string& where);
int require_int(const json& obj, const char* field, const std::string& where);

// Lowercase hex SHA-256 of a file's bytes / of a string.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& data);

// Fixed-precision decimal for reproducible text output (no locale, no
// scientific notation). Trailing zeros beyond `decimals` are not trimmed.
std::string format_fixed(double v, int decimals);

}  // namespace adeval::io

#endif  // ADEVAL_IO_UTIL_HPP_
