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
#include <initializer_list>
#include <string_view>

#include <json.hpp>

namespace qmux::detail {

/// Parses `text`, converting syntax errors into ConfigError with a line and
/// column.
nlohmann::json parse_document(std::string_view text, std::string_view what);

void require_object(const nlohmann::json& j, std::string_view context);
void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known,
                    std::string_view context);
double number_field(const nlohmann::json& j, std::string_view key, std::string_view context);
std::uint64_t unsigned_value(const nlohmann::json& v, std::string_view key,
                             std::string_view context);
int int_value(const nlohmann::json& v, std::string_view key, std::string_view context);
bool bool_field(const nlohmann::json& j, std::string_view key, std::string_view context);

}  // namespace qmux::detail
