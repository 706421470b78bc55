#include "kinsep_cli/svg.hpp"

#include <array>

#include "kinsep_cli/format.hpp"

namespace kinsep::cli {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};

}  // namespace

void write_svg(std::ostream& out, const LabelRaster& r) {
  constexpr int kPixel = 4;
  const int width = r.nx * kPixel;
  const int height = r.ny * kPixel;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n";
  out << "<desc>x " << format_double(r.x_min) << ' ' << format_double(r.x_max) << " y " << format_double(r.y_min)
      << ' ' << format_double(r.y_max) << "</desc>\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  for (int i = 0; i < r.nx; ++i) {
    for (int j = 0; j < r.ny; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * r.ny + j;
      const bool mark = !r.marked.empty() && r.marked[c];
      if (r.labels[c] < 0 && !mark) continue;
      const char* fill = mark ? "#000000" : kPalette[static_cast<std::size_t>(r.labels[c]) % kPalette.size()];
      // y grows upward in the workspace, downward in SVG.
      out << "<rect x=\"" << i * kPixel << "\" y=\"" << (r.ny - 1 - j) * kPixel << "\" width=\"" << kPixel
          << "\" height=\"" << kPixel << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace kinsep::cli
