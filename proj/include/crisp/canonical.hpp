// Copyright 2026 The crisp Authors
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

#ifndef CRISP_CANONICAL_HPP_
#define CRISP_CANONICAL_HPP_

#include <string>
#include <vector>

namespace crisp {

// Canonical decimal rendering used everywhere a float reaches text output:
// shortest form at 9 significant digits, locale independent, no trailing
// zeros. Non finite values are rejected upstream.
std::string format_double(double value);

// Deterministic number parsing for the same byte set format_double emits,
// plus plain scientific and decimal forms. Returns false on trailing junk.
bool parse_double(std::string_view text, double& out);

// The double a value becomes after one trip through format_double. Persisted
// artifacts carry exactly these values, so canonical inputs round-trip.
double canonical_double(double value);

std::vector<double> parse_number_list(std::string_view text);

}  // namespace crisp

#endif  // CRISP_CANONICAL_HPP_
