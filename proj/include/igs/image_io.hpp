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

#pragma once

#include <string>

#include "igs/util.hpp"

namespace igs {

/// Binary PPM (P6, maxval 255). rgb is (h*w) x 3 in [0,1], row = y*w + x;
/// values are clamped and rounded, so equal inputs give byte-identical files.
void write_ppm(const std::string& path, const Array& rgb, int w, int h);

/// Grayscale written as P6 with equal channels.
void write_ppm_gray(const std::string& path, const Array& gray, int w, int h);

struct LoadedImage {
  Array rgb;  // (h*w) x 3 in [0,1]
  int width = 0, height = 0;
};

LoadedImage read_ppm(const std::string& path);

/// First channel of a P6 file as (h*w) x 1.
Array read_ppm_gray(const std::string& path, int* w = nullptr, int* h = nullptr);

}  // namespace igs
