// Copyright 2026 The albench Authors
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

namespace albench::csv {

using Row = std::vector<std::string>;

// RFC 4180 subset: comma separated, optional double quotes, "" escapes.
Row parse_line(std::string_view line);
std::vector<Row> read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join(const Row& row);

}  // namespace albench::csv
