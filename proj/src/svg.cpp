#include "tilq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace tilq {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct Box {
  double x0, y0, w, h;
};

void render_panel(std::ofstream& out, const SvgPanel& panel, const Box& box) {
  const double ml = 46, mr = 12, mt = 24, mb = 34;  // margins
  const double px = box.x0 + ml, py = box.y0 + mt;
  const double pw = box.w - ml - mr, ph = box.h - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : panel.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const auto sx = [&](double x) { return px + (x - xmin) / (xmax - xmin) * pw; };
  const auto sy = [&](double y) { return py + (ymax - y) / (ymax - ymin) * ph; };

  out << "<rect x='" << num(px) << "' y='" << num(py) << "' width='" << num(pw) << "' height='"
      << num(ph) << "' fill='white' stroke='#444' stroke-width='1'/>\n";
  out << "<text x='" << num(px + pw / 2) << "' y='" << num(box.y0 + 15)
      << "' text-anchor='middle' font-size='12' font-family='sans-serif'>" << panel.title
      << "</text>\n";

  // axis ticks: 5 per axis
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4;
    const double yv = ymin + (ymax - ymin) * i / 4;
    out << "<line x1='" << num(sx(xv)) << "' y1='" << num(py + ph) << "' x2='" << num(sx(xv))
        << "' y2='" << num(py + ph + 4) << "' stroke='#444'/>\n";
    out << "<text x='" << num(sx(xv)) << "' y='" << num(py + ph + 16)
        << "' text-anchor='middle' font-size='10' font-family='sans-serif'>" << num(xv)
        << "</text>\n";
    out << "<line x1='" << num(px - 4) << "' y1='" << num(sy(yv)) << "' x2='" << num(px)
        << "' y2='" << num(sy(yv)) << "' stroke='#444'/>\n";
    out << "<text x='" << num(px - 6) << "' y='" << num(sy(yv) + 3)
        << "' text-anchor='end' font-size='10' font-family='sans-serif'>" << num(yv)
        << "</text>\n";
  }
  out << "<text x='" << num(px + pw / 2) << "' y='" << num(py + ph + 30)
      << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << panel.x_label
      << "</text>\n";

  // zero line if visible
  if (ymin < 0.0 && ymax > 0.0)
    out << "<line x1='" << num(px) << "' y1='" << num(sy(0)) << "' x2='" << num(px + pw)
        << "' y2='" << num(sy(0)) << "' stroke='#bbb' stroke-dasharray='3,3'/>\n";

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const auto& s = panel.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    bool pen_up = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.x[i]) || std::isnan(s.y[i])) {
        pen_up = true;
        continue;
      }
      if (pen_up && i > 0) {
        out << "' />\n<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
      }
      out << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
      pen_up = false;
    }
    out << "'/>\n";
    // legend entry
    const double ly = py + 14 + 14 * static_cast<double>(si);
    out << "<line x1='" << num(px + pw - 92) << "' y1='" << num(ly - 4) << "' x2='"
        << num(px + pw - 74) << "' y2='" << num(ly - 4) << "' stroke='" << color
        << "' stroke-width='2'/>\n";
    out << "<text x='" << num(px + pw - 70) << "' y='" << num(ly)
        << "' font-size='10' font-family='sans-serif'>" << s.label << "</text>\n";
  }
}

}  // namespace

void write_svg_file(const std::string& path, const std::string& title,
                    const std::vector<SvgPanel>& panels, int panels_per_row) {
  if (panels.empty()) throw std::invalid_argument("svg: no panels");
  panels_per_row = std::max(1, std::min<int>(panels_per_row, static_cast<int>(panels.size())));
  const int rows = (static_cast<int>(panels.size()) + panels_per_row - 1) / panels_per_row;
  const double pw = 420, ph = 300, top = 28;
  const double width = pw * panels_per_row, height = top + ph * rows;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot open " + path + " for writing");
  out << "<?xml version='1.0' encoding='UTF-8'?>\n";
  out << "<svg xmlns='http://www.w3.org/2000/svg' version='1.1' width='" << num(width)
      << "' height='" << num(height) << "' viewBox='0 0 " << num(width) << ' ' << num(height)
      << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << num(width / 2)
      << "' y='18' text-anchor='middle' font-size='14' font-family='sans-serif'>" << title
      << "</text>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int r = static_cast<int>(i) / panels_per_row;
    const int c = static_cast<int>(i) % panels_per_row;
    render_panel(out, panels[i], Box{c * pw, top + r * ph, pw, ph});
  }
  out << "</svg>\n";
}

}  // namespace tilq
