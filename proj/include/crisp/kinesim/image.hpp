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

#ifndef CRISP_KINESIM_IMAGE_HPP_
#define CRISP_KINESIM_IMAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace crisp::kinesim {

struct Rgb {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

// Simple RGB8 raster, row major, origin at the top left.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // 3 bytes per pixel

  RasterImage() = default;
  RasterImage(int w, int h, Rgb fill = {255, 255, 255});

  void set(int x, int y, Rgb color);  // silently drops out-of-bounds writes
  Rgb at(int x, int y) const;
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
};

// An image plus the caption shown to the critic. Captions are part of the
// request identity; pixel payloads are not.
struct LabeledImage {
  std::string label;
  RasterImage image;
};

// 5x7 uppercase bitmap text, scaled by an integer factor. Lowercase input
// is uppercased; unknown glyphs render as filled blocks.
void draw_text(RasterImage& image, int x, int y, std::string_view text,
               Rgb color, int scale = 1);

int text_width(std::string_view text, int scale = 1);

}  // namespace crisp::kinesim

#endif  // CRISP_KINESIM_IMAGE_HPP_
