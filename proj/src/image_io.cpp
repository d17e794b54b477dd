// Copyright 2026 The igs Authors
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

#include "igs/image_io.hpp"

#include <fstream>
#include <vector>

namespace igs {

namespace {

uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<uint8_t>(std::lround(c * 255.0));
}

void write_p6(const std::string& path, const std::vector<uint8_t>& bytes, int w, int h) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "ppm: cannot open " + path);
  f << "P6\n" << w << " " << h << "\n255\n";
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  require(f.good(), "ppm: write failed for " + path);
}

}  // namespace

void write_ppm(const std::string& path, const Array& rgb, int w, int h) {
  require(rgb.rows() == static_cast<Index>(w) * h && rgb.cols() == 3,
          "ppm: rgb must be (w*h) x 3");
  std::vector<uint8_t> bytes(static_cast<size_t>(w) * h * 3);
  for (Index p = 0; p < rgb.rows(); ++p)
    for (int c = 0; c < 3; ++c) bytes[static_cast<size_t>(p) * 3 + c] = quantize(rgb(p, c));
  write_p6(path, bytes, w, h);
}

void write_ppm_gray(const std::string& path, const Array& gray, int w, int h) {
  require(gray.rows() == static_cast<Index>(w) * h && gray.cols() == 1,
          "ppm: gray must be (w*h) x 1");
  std::vector<uint8_t> bytes(static_cast<size_t>(w) * h * 3);
  for (Index p = 0; p < gray.rows(); ++p) {
    const uint8_t v = quantize(gray(p, 0));
    bytes[static_cast<size_t>(p) * 3] = v;
    bytes[static_cast<size_t>(p) * 3 + 1] = v;
    bytes[static_cast<size_t>(p) * 3 + 2] = v;
  }
  write_p6(path, bytes, w, h);
}

namespace {

LoadedImage read_p6(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "ppm: cannot open " + path);
  std::string magic;
  f >> magic;
  require(magic == "P6", "ppm: not a P6 file: " + path);
  int w = 0, h = 0, maxval = 0;
  f >> w >> h >> maxval;
  require(w > 0 && h > 0 && maxval == 255, "ppm: unsupported header in " + path);
  f.get();  // single whitespace after header
  std::vector<uint8_t> bytes(static_cast<size_t>(w) * h * 3);
  f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(f.good(), "ppm: truncated payload in " + path);
  LoadedImage img;
  img.width = w;
  img.height = h;
  img.rgb.resize(static_cast<Index>(w) * h, 3);
  for (Index p = 0; p < img.rgb.rows(); ++p)
    for (int c = 0; c < 3; ++c)
      img.rgb(p, c) = bytes[static_cast<size_t>(p) * 3 + c] / 255.0;
  return img;
}

}  // namespace

LoadedImage read_ppm(const std::string& path) { return read_p6(path); }

Array read_ppm_gray(const std::string& path, int* w, int* h) {
  const LoadedImage img = read_p6(path);
  if (w) *w = img.width;
  if (h) *h = img.height;
  return img.rgb.col(0);
}

}  // namespace igs
