#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tilq {

// n_points evenly spaced values from a to b inclusive; n_points >= 2.
std::vector<double> linspace(double a, double b, int n_points);

// Piecewise-linear interpolation of (grid, values) at x, clamped to the
// grid range. grid must be strictly increasing with >= 2 points.
double interp_linear(std::span<const double> grid, std::span<const double> values, double x);

// Index of the subinterval [grid[i], grid[i+1]) containing x; the last
// interval is closed on the right.
std::size_t locate_interval(std::span<const double> grid, double x);

}  // namespace tilq
