#pragma once

// Helpers for piecewise-linear functions given by (grid, values) tables.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace scdt::detail {

/// Linear interpolation inside [grid.front(), grid.back()], zero outside.
inline double interpolate(std::span<const double> grid, std::span<const double> values,
                          double t) {
  if (t < grid.front() || t > grid.back()) return 0.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  if (it == grid.end()) return values.back();
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  if (j == 0) return values.front();
  const double w = (t - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

/// Linear interpolation with the argument clamped to the table.
inline double interpolate_inside(std::span<const double> grid, std::span<const double> values,
                                 double t) {
  return interpolate(grid, values, std::clamp(t, grid.front(), grid.back()));
}

/// Integral of |v| over a cell of width h where v is linear from v0 to v1.
inline double abs_linear_integral(double v0, double v1, double h) {
  if ((v0 >= 0.0 && v1 >= 0.0) || (v0 <= 0.0 && v1 <= 0.0))
    return 0.5 * h * (std::abs(v0) + std::abs(v1));
  return 0.5 * h * (v0 * v0 + v1 * v1) / (std::abs(v0) + std::abs(v1));
}

/// Integral of min(a, b) over a cell of width h where both are linear.
inline double min_linear_integral(double a0, double a1, double b0, double b1, double h) {
  const double d0 = a0 - b0;
  const double d1 = a1 - b1;
  if ((d0 <= 0.0 && d1 <= 0.0)) return 0.5 * h * (a0 + a1);
  if ((d0 >= 0.0 && d1 >= 0.0)) return 0.5 * h * (b0 + b1);
  // a and b cross inside the cell at fraction r.
  const double r = d0 / (d0 - d1);
  const double at_cross = a0 + r * (a1 - a0);
  const double left = d0 < 0.0 ? 0.5 * r * h * (a0 + at_cross) : 0.5 * r * h * (b0 + at_cross);
  const double right = d1 < 0.0 ? 0.5 * (1.0 - r) * h * (at_cross + a1)
                                : 0.5 * (1.0 - r) * h * (at_cross + b1);
  return left + right;
}

/// Sorted union of both grids and the interval ends, restricted to [lo, hi].
inline std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b,
                                             double lo, double hi) {
  std::vector<double> out;
  out.reserve(a.size() + b.size() + 2);
  out.push_back(lo);
  out.push_back(hi);
  for (double x : a)
    if (x > lo && x < hi) out.push_back(x);
  for (double x : b)
    if (x > lo && x < hi) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// End values on the sub-cell [u, v] of a function that is linear inside its
/// grid and zero outside. [u, v] must not straddle a grid end.
inline std::pair<double, double> cell_values(std::span<const double> grid,
                                             std::span<const double> values, double u, double v) {
  if (u < grid.front() || v > grid.back()) return {0.0, 0.0};
  return {interpolate(grid, values, u), interpolate(grid, values, v)};
}

/// Running maximum, used to remove rounding-level decreases.
inline void make_nondecreasing(std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
}

}  // namespace scdt::detail
