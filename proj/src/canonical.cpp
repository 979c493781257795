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

#include "crisp/canonical.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <string_view>
#include <system_error>

namespace crisp {

std::string format_double(double value) {
  // +0.0 and -0.0 compare equal but render differently; pin the former.
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                           std::chars_format::general, 9);
  return std::string(buf.data(), res.ptr);
}

bool parse_double(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

double canonical_double(double value) {
  double out = 0.0;
  parse_double(format_double(value), out);
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    double v = 0.0;
    if (!parse_double(text.substr(i, j - i), v)) return {};
    values.push_back(v);
    i = j;
  }
  return values;
}

}  // namespace crisp
