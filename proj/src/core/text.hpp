/*
 * Copyright 2026 The ltwkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Small text helpers shared by the CSV, checkpoint and config readers.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ltw::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

/// Parses a full token as a double; throws Parse on junk or trailing chars.
/// Non-finite values are accepted here; callers enforce finiteness.
double parse_double(std::string_view token);

long long parse_int(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);

std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(std::string_view data);

}  // namespace ltw::text
