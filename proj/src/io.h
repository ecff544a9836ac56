// Copyright 2026 The Slotforge Authors.
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

#ifndef SLOTFORGE_SRC_IO_H_
#define SLOTFORGE_SRC_IO_H_

#include <filesystem>
#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include "json.hpp"

namespace slotforge {

// Calls `fn(line_number, line)` for every non-blank line; numbering starts at 1.
void for_each_record_line(
    std::istream& in,
    const std::function<void(size_t, const std::string&)>& fn);

// Parses one line-delimited record, throwing a data error that names the line.
nlohmann::json parse_record(size_t line_number, const std::string& line);

// Compact single-line JSON with UTF-8 kept as-is.
std::string dump_record(const nlohmann::json& record);

// Writes to a sibling temporary file, then renames over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_IO_H_
