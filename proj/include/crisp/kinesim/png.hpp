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

#ifndef CRISP_KINESIM_PNG_HPP_
#define CRISP_KINESIM_PNG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "crisp/kinesim/image.hpp"

namespace crisp::kinesim {

// Deterministic truecolor PNG: filter 0 scanlines, one zlib stream at the
// default compression level. Byte-identical for identical pixels.
std::vector<uint8_t> encode_png(const RasterImage& image);

void write_png(const std::string& path, const RasterImage& image);

// Minimal decoder for the encoder's own output (8-bit RGB, filters 0-4,
// single IDAT chain). Used by tests and golden comparisons.
RasterImage decode_png(const std::vector<uint8_t>& bytes);

RasterImage read_png(const std::string& path);

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_PNG_HPP_
