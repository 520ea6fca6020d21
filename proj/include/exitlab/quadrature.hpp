#pragma once

#include <functional>
#include <vector>

namespace exitlab::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  int evaluations = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

// Globally adaptive Gauss-Kronrod 7-15 on [a, b]: repeatedly bisects the
// interval with the largest error estimate.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

// As above with interior break points (kink locations split into panels).
Result integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& breaks, const Options& opts = {});

// [a, inf): maps the tail onto (0, 1] via t = a + u/(1-u).
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        const Options& opts = {});

// (-inf, inf) with a scale hint for the variable change t = s*u/(1-u^2).
Result integrate_real_line(const std::function<double(double)>& f, double scale,
                           const Options& opts = {});

}  // namespace exitlab::quadrature
