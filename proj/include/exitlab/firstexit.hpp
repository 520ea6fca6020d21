#pragma once

#include <functional>

#include "exitlab/grid.hpp"
#include "exitlab/laplace.hpp"
#include "exitlab/levy.hpp"

namespace exitlab::firstexit {

// Orientation used throughout: h(x, t) is the density of the first time the
// process reaches level t, as a function of the ELAPSED TIME x at fixed
// barrier level t. Equivalently P(T_t <= x) = P(Z_x >= t); the Laplace
// transform of h in the level variable t is psi(s) e^{-x psi(s)} / s.

struct ExitTimeQuery {
  double a = 0.0;  // Brownian barrier component
  double b = 0.0;  // subordinator barrier component
  levy::ModelParams model;
  levy::SubordinatorSpec spec;
  GridSpec grid;
};

enum class QueryStatus { Ok, TrivialExit };

// a, b <= 0 makes every related first-exit time zero; flagged rather than
// treated as an error.
QueryStatus validate(const ExitTimeQuery& query);

// First-exit density of mu s + sigma W_s through level a > 0 (upward), as a
// function of elapsed time. mu < 0 pairs with the downward-drift reading:
// IG(a/sigma, -mu/sigma) law; mu = 0 follows the heavy-tailed stable-1/2 law.
// mu > 0 is a domain error (defective exit law, out of scope).
double brownian_exit_density_at(double a, double mu, double sigma, double x);
double brownian_exit_cdf(double a, double mu, double sigma, double x);
DensityCurve brownian_exit_density(double a, double mu, double sigma, const GridSpec& grid);

// Finite convolution (f*g)(t) = int_0^t f(u) g(t-u) du on the shared uniform
// grid, trapezoid weights. Throws GridMismatch for unequal grids.
DensityCurve convolve(const DensityCurve& f, const DensityCurve& g);

// Closed-form exit density on the x grid at fixed level t. Branches:
//   GammaBDLP        product formula nu e^{-x nu} I0(2 sqrt(x nu alpha t)) e^{-alpha t}
//   IGBDLP           triple convolution of tail, compound-Poisson part and IG part
//   PTSStationary    tail convolved with the tempered-stable marginal
//                    (MacRobert E route, defined for 1/gamma = 2, 3, ...)
//   PTSBDLP          as PTSStationary plus the finite-activity part
//   GammaStationary  printed integral behind as_printed (degenerate 2F1
//                    surfaces PoleError); otherwise ClosedFormUnavailable
//   IGStationary     ClosedFormUnavailable
DensityCurve exit_density_closed(const levy::SubordinatorSpec& spec, double level,
                                 const GridSpec& grid, bool as_printed = false);
double exit_density_closed_at(const levy::SubordinatorSpec& spec, double level, double x,
                              bool as_printed = false);

// Reference path: pointwise inversion of psi(s) e^{-x psi(s)} / s in the
// level variable, evaluated at the given level for each grid x.
DensityCurve exit_density_numeric(const levy::SubordinatorSpec& spec, double level,
                                  const GridSpec& grid,
                                  const laplace::InversionSettings& settings = {});
double exit_density_numeric_at(const levy::SubordinatorSpec& spec, double level, double x,
                               const laplace::InversionSettings& settings = {});

// P(T_level <= x) = 1 - L^-1[e^{-x psi(s)} / s](level): one inversion per
// point, used by the Monte Carlo concordance checks.
double exit_cdf_numeric(const levy::SubordinatorSpec& spec, double level, double x,
                        const laplace::InversionSettings& settings = {});

// Mean first-exit time of the gamma subordinator through level t: nested
// quadrature of the double-integral form (independent of elapsed time).
struct MomentResult {
  double value;
  double error;
};
MomentResult exit_moment_gamma(double level, double nu, double alpha);

// Exit-density factor functions at fixed elapsed time x, exposed for
// validation against the inversion path. q_* describe the compound-Poisson
// component (atom + absolutely continuous part); ig_r is the IG-part density.
struct ConvolutionPieces {
  std::function<double(double)> p;     // integrated tail, level variable
  std::function<double(double)> q_ac;  // a.c. part of the CP component
  double q_atom = 0.0;                 // CP component mass at level 0
  std::function<double(double)> r;     // remaining factor density
  double r_atom = 0.0;
};
ConvolutionPieces ig_exit_pieces(const levy::SubordinatorSpec& spec, double x);
ConvolutionPieces pts_exit_pieces(const levy::SubordinatorSpec& spec, double x);

// The printed forms of the IG q/r factors (Bessel-derivative integrand with
// the delta term dropped, and the r expression as printed), kept for the
// cross-checks that document their relation to the inversion path.
double ig_q_bessel_term_printed(const levy::SubordinatorSpec& spec, double x, double t);
double ig_r_printed(const levy::SubordinatorSpec& spec, double x, double t);

}  // namespace exitlab::firstexit
