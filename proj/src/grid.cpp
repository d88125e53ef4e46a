#include "tilq/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace tilq {

std::vector<double> linspace(double a, double b, int n_points) {
  if (n_points < 2) throw std::invalid_argument("linspace: need at least 2 points");
  std::vector<double> g(n_points);
  const double h = (b - a) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) g[i] = a + i * h;
  g.back() = b;
  return g;
}

std::size_t locate_interval(std::span<const double> grid, double x) {
  if (x <= grid.front()) return 0;
  if (x >= grid[grid.size() - 2]) return grid.size() - 2;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

double interp_linear(std::span<const double> grid, std::span<const double> values, double x) {
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const std::size_t i = locate_interval(grid, x);
  const double w = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return values[i] + w * (values[i + 1] - values[i]);
}

}  // namespace tilq
