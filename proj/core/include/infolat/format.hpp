// Copyright 2026 The infolat Authors
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

namespace infolat {

// All floating-point output uses 12 significant digits.
std::string format_number(double value);

std::vector<std::string> split_csv_line(std::string_view line);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

// FNV-1a 64-bit hash rendered as 16 hex digits; used as the config hash in
// provenance headers.
std::string config_hash(std::string_view text);

std::string version_string();

}  // namespace infolat
