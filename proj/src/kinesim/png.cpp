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

#include "crisp/kinesim/png.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "crisp/errors.hpp"

namespace crisp::kinesim {
namespace {

void push_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
         static_cast<uint32_t>(p[2]) << 8 | static_cast<uint32_t>(p[3]);
}

void push_chunk(std::vector<uint8_t>& out, const char type[4],
                const std::vector<uint8_t>& data) {
  push_u32(out, static_cast<uint32_t>(data.size()));
  size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + type_at, static_cast<uInt>(4 + data.size()));
  push_u32(out, crc);
}

constexpr uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

[[noreturn]] void bad_png(const std::string& why) {
  throw Error(ErrorKind::kIo, "png: " + why);
}

int paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a);
  int pb = std::abs(p - b);
  int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<uint8_t> encode_png(const RasterImage& image) {
  if (image.width <= 0 || image.height <= 0) bad_png("empty image");

  std::vector<uint8_t> raw;
  size_t stride = static_cast<size_t>(image.width) * 3;
  raw.reserve((stride + 1) * image.height);
  for (int y = 0; y < image.height; ++y) {
    raw.push_back(0);  // filter type 0 on every scanline
    const uint8_t* row = image.pixels.data() + y * stride;
    raw.insert(raw.end(), row, row + stride);
  }

  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()),
                Z_DEFAULT_COMPRESSION) != Z_OK) {
    bad_png("zlib compression failed");
  }
  compressed.resize(bound);

  std::vector<uint8_t> ihdr;
  push_u32(ihdr, static_cast<uint32_t>(image.width));
  push_u32(ihdr, static_cast<uint32_t>(image.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // no interlace

  std::vector<uint8_t> out(kSignature, kSignature + 8);
  push_chunk(out, "IHDR", ihdr);
  push_chunk(out, "IDAT", compressed);
  push_chunk(out, "IEND", {});
  return out;
}

void write_png(const std::string& path, const RasterImage& image) {
  std::vector<uint8_t> bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) bad_png("cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out.good()) bad_png("short write to " + path);
}

RasterImage decode_png(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
    bad_png("bad signature");
  }

  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> compressed;
  size_t at = 8;
  bool saw_ihdr = false;
  while (at + 8 <= bytes.size()) {
    uint32_t len = read_u32(bytes.data() + at);
    if (at + 12 + len > bytes.size()) bad_png("truncated chunk");
    std::string type(reinterpret_cast<const char*>(bytes.data() + at + 4), 4);
    const uint8_t* data = bytes.data() + at + 8;
    if (type == "IHDR") {
      if (len != 13) bad_png("bad IHDR");
      width = read_u32(data);
      height = read_u32(data + 4);
      if (data[8] != 8 || data[9] != 2 || data[12] != 0) {
        bad_png("unsupported format (need 8-bit RGB, no interlace)");
      }
      saw_ihdr = true;
    } else if (type == "IDAT") {
      compressed.insert(compressed.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    at += 12 + len;
  }
  if (!saw_ihdr || width == 0 || height == 0) bad_png("missing IHDR");

  size_t stride = static_cast<size_t>(width) * 3;
  std::vector<uint8_t> raw((stride + 1) * height);
  uLongf raw_size = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_size, compressed.data(),
                 static_cast<uLong>(compressed.size())) != Z_OK ||
      raw_size != raw.size()) {
    bad_png("zlib decompression failed");
  }

  RasterImage image(static_cast<int>(width), static_cast<int>(height));
  std::vector<uint8_t> prior(stride, 0);
  for (uint32_t y = 0; y < height; ++y) {
    const uint8_t* src = raw.data() + y * (stride + 1);
    uint8_t filter = src[0];
    uint8_t* dst = image.pixels.data() + y * stride;
    for (size_t i = 0; i < stride; ++i) {
      int a = i >= 3 ? dst[i - 3] : 0;
      int b = prior[i];
      int c = i >= 3 ? prior[i - 3] : 0;
      int x = src[1 + i];
      switch (filter) {
        case 0: dst[i] = static_cast<uint8_t>(x); break;
        case 1: dst[i] = static_cast<uint8_t>(x + a); break;
        case 2: dst[i] = static_cast<uint8_t>(x + b); break;
        case 3: dst[i] = static_cast<uint8_t>(x + (a + b) / 2); break;
        case 4: dst[i] = static_cast<uint8_t>(x + paeth(a, b, c)); break;
        default: bad_png("unknown filter type");
      }
    }
    std::memcpy(prior.data(), dst, stride);
  }
  return image;
}

RasterImage read_png(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) bad_png("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace crisp::kinesim
