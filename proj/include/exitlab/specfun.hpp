#pragma once

#include <complex>
#include <vector>

namespace exitlab::specfun {

using Complex = std::complex<double>;

double erf(double x);
double erfc(double x);

// Upper incomplete gamma Gamma(a, x) for x > 0 and any real a. Positive a is
// evaluated by series (x <= a + 1) or continued fraction (x > a + 1);
// a <= 0 by the downward recurrence Gamma(a, x) = (Gamma(a+1, x) - x^a e^-x) / a
// started in the positive-parameter region.
double gamma_upper(double a, double x);

// Modified Bessel functions of the first kind, order 0 and 1. The scaled
// variants return e^-x I_nu(x); i0/i1 reconstruct the unscaled value and
// throw std::overflow_error once e^x leaves the exponent range.
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);
// d/dx I_0(x) = I_1(x).
double bessel_i0_prime(double x);

// Terminating Gauss hypergeometric 2F1(-n, -n; c; x): the finite sum of n+1
// terms, accumulated in extended precision and rounded once. Throws PoleError
// when a Pochhammer factor (c)_k vanishes for some k <= n.
double hyp2f1_terminating(int n, double c, double x);

struct PFQParams {
  std::vector<Complex> upper;  // a_1..a_m
  std::vector<Complex> lower;  // b_1..b_n
  Complex argument;
};

struct PFQResult {
  Complex value;
  double error_estimate;  // truncation bound on the last accepted tail
  int terms_used;
};

// Generalized hypergeometric series sum_k prod(a_i)_k / prod(b_j)_k x^k / k!.
// Sums until the truncation bound drops below tol or the series terminates;
// throws NonConvergence if the ratio test fails within max_terms.
PFQResult pfq(const PFQParams& params, int max_terms = 2000, double tol = 1e-15);

// MacRobert E-function with no lower parameters, E(a_1,...,a_m :: x).
// m >= 2: the residue-series expansion (converges for all finite x off the
// branch cut); m == 1: |x| < 1 and |x| > 1 series, the better-converging one
// near |x| = 1. Throws NonConvergence when neither series is usable.
Complex macrobert_e(const std::vector<Complex>& a_list, Complex x);

// The conjugate-pair sum  sum_{i,-i} (1/i) E(a :: x e^{i pi})  for real
// parameter lists and x > 0 collapses to 2 Im E(a :: x e^{+i pi}); returns
// that real value.
double macrobert_e_conjugate_pair(const std::vector<double>& a_list, double x);

// Log-gamma and gamma for real arguments (wrappers that keep sign handling in
// one place; Gamma of non-positive integers throws PoleError).
double gamma_fn(double x);
double lgamma_fn(double x);
// Gamma(z) for complex z via Lanczos; poles throw PoleError.
Complex gamma_fn(Complex z);

}  // namespace exitlab::specfun
