#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace exitlab {

struct GridSpec {
  double start = 0.0;
  double step = 0.0;
  int count = 0;

  double at(int i) const { return start + step * i; }
  bool valid() const { return step > 0.0 && count > 0 && start >= 0.0; }
};

// A sampled nonnegative function on a uniform grid. Used for exit densities
// and their convolutions; values are clamped at zero with a tolerance of
// -1e-12 for inversion noise (larger negative excursions are a kernel bug and
// are kept so tests can see them).
struct DensityCurve {
  double grid_start = 0.0;
  double grid_step = 0.0;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  double x_at(int i) const { return grid_start + grid_step * i; }
  GridSpec grid() const { return {grid_start, grid_step, size()}; }

  bool same_grid(const DensityCurve& other) const {
    return grid_start == other.grid_start && grid_step == other.grid_step &&
           values.size() == other.values.size();
  }

  double trapezoid_integral() const {
    if (values.size() < 2) return 0.0;
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
    return acc * grid_step;
  }

  double trapezoid_mean() const {
    if (values.size() < 2) return 0.0;
    double acc = 0.5 * (x_at(0) * values.front() +
                        x_at(size() - 1) * values.back());
    for (int i = 1; i + 1 < size(); ++i) acc += x_at(i) * values[i];
    return acc * grid_step;
  }

  // CDF on the same grid by cumulative trapezoid.
  std::vector<double> cumulative() const {
    std::vector<double> cdf(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i) {
      cdf[i] = cdf[i - 1] + 0.5 * (values[i - 1] + values[i]) * grid_step;
    }
    return cdf;
  }
};

// Samples fn on the grid, clamping tiny negative inversion noise; returns the
// number of clamped nodes through clamped_count when non-null.
DensityCurve sample_density(const GridSpec& grid, const std::function<double(double)>& fn,
                            int* clamped_count = nullptr);

}  // namespace exitlab
