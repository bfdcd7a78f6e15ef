// Copyright 2026 The qmux Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmux::cli {

/// Rows of pre-formatted numeric cells with a header, emitted as CSV or as
/// a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const;
    std::string json() const;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so
/// readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// `path` empty or "-" means `out`.
void emit(const std::string& path, const std::string& content, std::ostream& out);

}  // namespace qmux::cli
