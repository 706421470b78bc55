#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

namespace kinsep::cli {

/// Flat raster of labels; cell (i, j) has i along x and j along y.
struct LabelRaster {
  int nx = 0;
  int ny = 0;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::vector<int> labels;  ///< nx * ny, row-major with j fastest; negative = background
  std::vector<bool> marked; ///< optional overlay drawn in black, same layout
};

/// Writes one rectangle per labeled cell, colored from a fixed palette.
void write_svg(std::ostream& out, const LabelRaster& raster);

}  // namespace kinsep::cli
