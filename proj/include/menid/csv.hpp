// Copyright 2026 The MENID Authors
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
#include <vector>

namespace menid {

// Shortest round-trip-safe text for CSV output: 9 significant digits.
std::string format_real(double value);

// Comma-separated line, newline terminated. Fields holding commas, quotes or
// newlines are quoted.
std::string csv_line(const std::vector<std::string>& fields);

// Writes `text` to `path`, creating parent directories. Throws Error.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace menid
