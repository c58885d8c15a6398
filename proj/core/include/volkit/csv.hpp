// Copyright 2026 The volkit Authors.
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

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

// CSV conventions shared by every emitter: header row, UTF-8, '\n' line
// endings, doubles with 17 significant digits so they re-parse exactly.
namespace volkit::csv {

/// "%.17g"; non-finite values render as inf, -inf and nan.
std::string format_double(double x);

/// Parses what format_double writes (including inf / nan).
double parse_double(std::string_view s);

std::string join(std::initializer_list<std::string> fields);
std::string join(const std::vector<std::string>& fields);

std::vector<std::string> split(std::string_view line);

}  // namespace volkit::csv
