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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmux::detail {

struct CsvRecord {
    std::size_t line = 0;  // 1-based
    std::vector<std::string_view> fields;
};

/// Splits into non-empty, non-comment records. Fields are trimmed; quoting
/// is not supported since every format here is numeric.
std::vector<CsvRecord> split_csv(std::string_view text);

double parse_double_field(std::string_view field, std::size_t line, std::string_view column);
std::uint64_t parse_u64_field(std::string_view field, std::size_t line, std::string_view column);

}  // namespace qmux::detail
