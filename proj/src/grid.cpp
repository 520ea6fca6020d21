#include "exitlab/grid.hpp"

#include <cstdio>

namespace exitlab {

DensityCurve sample_density(const GridSpec& grid, const std::function<double(double)>& fn,
                            int* clamped_count) {
  DensityCurve curve;
  curve.grid_start = grid.start;
  curve.grid_step = grid.step;
  curve.values.resize(grid.count);
  int clamped = 0;
  for (int i = 0; i < grid.count; ++i) {
    double v = fn(grid.at(i));
    if (v < 0.0 && v >= -1e-12) {
      v = 0.0;
      ++clamped;
    }
    curve.values[i] = v;
  }
  if (clamped > 0) {
    std::fprintf(stderr, "warning: clamped %d negative inversion-noise node(s) to zero\n",
                 clamped);
  }
  if (clamped_count) *clamped_count = clamped;
  return curve;
}

}  // namespace exitlab
