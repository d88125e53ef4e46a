#pragma once

#include <string>
#include <vector>

namespace tilq {

// Minimal static SVG 1.1 line plots: axes, ticks, legend, one polyline per
// series, panels laid out in a row-major grid. NaN samples break the line.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPanel {
  std::string title;
  std::string x_label = "s";
  std::string y_label;
  std::vector<SvgSeries> series;
};

void write_svg_file(const std::string& path, const std::string& title,
                    const std::vector<SvgPanel>& panels, int panels_per_row = 2);

}  // namespace tilq
