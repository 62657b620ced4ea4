// core/src/heatmap.cc

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

#include "tonequant/heatmap.h"

#include <cctype>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "binary_io.h"

namespace tonequant {

namespace {

std::pair<double, double> value_range(const DistanceMatrix& m) {
  return {m.values.minCoeff(), m.values.maxCoeff()};
}

}  // namespace

GrayImage heatmap_image(const DistanceMatrix& matrix, const HeatmapSpec& spec) {
  if (spec.cell_size < 1) throw InvalidArgument("heatmap: cell_size must be positive");
  if (matrix.size() < 1) throw InvalidArgument("heatmap: empty matrix");
  if (matrix.any_flagged()) throw InvalidArgument("heatmap: matrix has flagged cells");
  const auto [lo, hi] = value_range(matrix);
  const int c = matrix.size();
  GrayImage img;
  img.width = img.height = c * spec.cell_size;
  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      std::uint8_t level = 128;
      if (hi > lo)
        level = static_cast<std::uint8_t>(std::lround(255.0 * (hi - matrix.values(i, j)) / (hi - lo)));
      for (int y = i * spec.cell_size; y < (i + 1) * spec.cell_size; ++y)
        for (int x = j * spec.cell_size; x < (j + 1) * spec.cell_size; ++x)
          img.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) +
                     static_cast<std::size_t>(x)] = level;
    }
  }
  return img;
}

void render_heatmap(const DistanceMatrix& matrix, const std::filesystem::path& path,
                    const HeatmapSpec& spec) {
  const GrayImage img = heatmap_image(matrix, spec);
  std::string bytes = fmt::format("P5\n{} {}\n255\n", img.width, img.height);
  bytes.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  detail::write_file_bytes(path, bytes);

  const auto [lo, hi] = value_range(matrix);
  std::string legend;
  legend += fmt::format("task: {}\n", matrix.task.empty() ? "unspecified" : matrix.task);
  legend += fmt::format("distance: {}\n", matrix.normalized ? "normalized" : "raw");
  legend += "shade: lighter = lower distance\n";
  if (hi > lo)
    legend += fmt::format("scale: 255 = {} (min), 0 = {} (max)\n", lo, hi);
  else
    legend += fmt::format("scale: degenerate (all cells {}), rendered as 128\n", lo);
  legend += fmt::format("cell_size: {}\n", spec.cell_size);
  legend += "order (rows top to bottom, columns left to right):";
  for (const auto& name : matrix.classes) legend += " " + name;
  legend += "\n";
  std::filesystem::path legend_path = path;
  legend_path += ".legend.txt";
  detail::write_file_bytes(legend_path, legend);
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::vector<unsigned char> raw = detail::read_file_bytes(path);
  const std::string bytes(raw.begin(), raw.end());
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  auto fail = [&](const std::string& what) {
    return FormatError(fmt::format("{}: offset {}: {}", path.string(), pos, what));
  };
  if (token() != "P5") throw fail("not a binary PGM");
  GrayImage img;
  try {
    img.width = std::stoi(token());
    img.height = std::stoi(token());
    if (std::stoi(token()) != 255) throw fail("only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw fail("bad header");
  }
  ++pos;  // single whitespace before the raster
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (img.width < 1 || img.height < 1 || bytes.size() - std::min(pos, bytes.size()) != n)
    throw fail("raster size mismatch");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  return img;
}

}  // namespace tonequant
