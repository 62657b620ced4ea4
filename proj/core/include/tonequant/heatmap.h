// tonequant/heatmap.h

// Copyright 2026 The tonequant Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TONEQUANT_HEATMAP_H_
#define TONEQUANT_HEATMAP_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tonequant/editdist.h"

namespace tonequant {

struct HeatmapSpec {
  int cell_size = 16;  // pixels per matrix cell, both axes
};

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

/// Cell gray level: 255 at the matrix minimum (lighter = closer), 0 at the
/// maximum, linear in between, rounded to nearest. A constant matrix maps to
/// 128 everywhere.
GrayImage heatmap_image(const DistanceMatrix& matrix, const HeatmapSpec& spec = {});

/// Writes a binary PGM (P5) and a text legend `<path>.legend.txt` with the
/// scale bounds and class order. Throws on flagged cells.
void render_heatmap(const DistanceMatrix& matrix, const std::filesystem::path& path,
                    const HeatmapSpec& spec = {});

GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace tonequant

#endif  // TONEQUANT_HEATMAP_H_
