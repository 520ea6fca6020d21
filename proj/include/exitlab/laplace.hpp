#pragma once

#include <complex>
#include <functional>

#include "exitlab/grid.hpp"

namespace exitlab::laplace {

using Complex = std::complex<double>;

// A Laplace-domain function F(s), finite for Re(s) > abscissa.
struct TransformFn {
  std::function<Complex(Complex)> evaluator;
  double abscissa = 0.0;
};

// Spot-probes the evaluator right of the abscissa; throws std::domain_error
// on a non-finite probe.
TransformFn make_transform(std::function<Complex(Complex)> evaluator, double abscissa);

enum class InversionMethod { GaverStehfest, Talbot };

struct InversionSettings {
  InversionMethod method = InversionMethod::Talbot;
  // Gaver-Stehfest: even term count in [8, 18]; Talbot: contour nodes in [16, 64].
  int order = 32;
  GridSpec grid;
};

// Pointwise numerical inversion at t > 0. Gaver-Stehfest throws
// NumericalBlowup when the alternating sum loses all significant digits.
double invert_at(const TransformFn& F, double t, const InversionSettings& settings);

// Inversion over settings.grid (noise-clamped per DensityCurve contract).
DensityCurve invert(const TransformFn& F, const InversionSettings& settings);

// Exponential tail bound |f(t)| <= scale * e^{-rate t} for t >= from, used to
// truncate the forward integral analytically.
struct TailBound {
  double scale = 0.0;
  double rate = 0.0;
  double from = 0.0;
};

struct ForwardResult {
  Complex value;
  double error;  // quadrature estimate plus the analytic tail bound
};

// F(s) = int_0^inf f(t) e^{-st} dt by adaptive quadrature on [0, T] plus the
// tail bound. Without a bound the integrand is probed for decay and
// TailUnbounded is thrown if none is seen.
ForwardResult forward(const std::function<double(double)>& f, Complex s,
                      const TailBound* tail = nullptr);

// Theorem-level transform builders. psi is a subordinator Laplace exponent
// evaluated at complex arguments.
using ExponentFn = std::function<Complex(Complex)>;

// Transform (in the barrier-level variable) of the first-exit density at
// elapsed time x:  F(s) = psi(s) e^{-x psi(s)} / s.
TransformFn exit_density_transform(const ExponentFn& psi, double x);

// Transform of the q-th exit-time moment as printed:  q Gamma(1+q) / (s psi(s)^q).
TransformFn moment_transform(const ExponentFn& psi, double q);

}  // namespace exitlab::laplace
