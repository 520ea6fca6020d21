#pragma once

#include <complex>
#include <functional>
#include <string>

#include "exitlab/rng.hpp"

namespace exitlab::levy {

using Complex = std::complex<double>;

enum class Law {
  GammaStationary,  // Levy density nu x^-1 e^{-alpha x}
  GammaBDLP,        // nu alpha e^{-alpha x}
  IGStationary,     // delta/sqrt(2 pi) x^-3/2 e^{-gamma^2 x/2}
  IGBDLP,           // delta/(2 sqrt(2 pi)) x^-3/2 (1 + gamma^2 x) e^{-gamma^2 x/2}
  PTSStationary,    // beta k^-2g g/(G(g)G(1-g)) x^{-g-1} e^{-k^2 x/2}
  PTSBDLP,          // PTSStationary density times (g + k^2 x / 2)
};

// Tagged parameter set for one subordinator law. Only the fields of the
// active family are meaningful; the factories below are the supported way to
// build one.
struct SubordinatorSpec {
  Law law = Law::GammaBDLP;
  double nu = 0.0;     // gamma family
  double alpha = 0.0;  // gamma family
  double delta = 0.0;  // IG family (delta_1)
  double gam = 0.0;    // IG family gamma
  double beta = 0.0;   // PTS family
  double index = 0.0;  // PTS stable index gamma in (0,1)
  double k = 0.0;      // PTS exponential tilt

  static SubordinatorSpec gamma_stationary(double nu, double alpha);
  static SubordinatorSpec gamma_bdlp(double nu, double alpha);
  static SubordinatorSpec ig_stationary(double delta, double gam);
  static SubordinatorSpec ig_bdlp(double delta, double gam);
  static SubordinatorSpec pts_stationary(double beta, double index, double k);
  static SubordinatorSpec pts_bdlp(double beta, double index, double k);

  // Throws std::domain_error on out-of-range parameters. Sampling and
  // exponent evaluation additionally require k > 0 for the PTS family.
  void validate(bool needs_exponent = false) const;

  // Exponential tilt of the law: the exponent evaluator is analytic for
  // Re(s) > -tilt. alpha (gamma), gamma^2/2 (IG), k^2/2 (PTS).
  double tilt() const;

  std::string to_string() const;
};

// CLI spec strings, e.g. "gamma-bdlp:nu=1,alpha=1", "ig-stat:delta=1,gamma=1",
// "pts-bdlp:beta=1,gamma=0.5,k=1". Throws ParseError naming the offending key.
SubordinatorSpec parse_spec(const std::string& text);

// Parameters of the approximate log-return dynamics
// dX = mu dt + sigma dW + rho dZ_{lambda t}.
struct ModelParams {
  double mu = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double r = 0.0;

  void validate() const;  // sigma > 0, lambda > 0; warns on rho >= 0
};

struct LaplaceExponent {
  SubordinatorSpec spec;
  double tilt = 0.0;
  std::function<Complex(Complex)> evaluator;

  double operator()(double s) const { return evaluator(Complex(s, 0.0)).real(); }
  Complex operator()(Complex s) const { return evaluator(s); }
  double mean() const;      // psi'(0), exact per-law differentiation
  double variance() const;  // -psi''(0)
};

// Levy density w(x) of the given law at x > 0.
double levy_density(const SubordinatorSpec& spec, double x);

// Analytic derivative of the stationary-law Levy densities (for the
// stationary->BDLP map); throws for BDLP specs.
double stationary_levy_density_prime(const SubordinatorSpec& spec, double x);

// w(x) = -u(x) - x u'(x) on function objects.
std::function<double(double)> bdlp_from_stationary(std::function<double(double)> u,
                                                   std::function<double(double)> u_prime);

// Integrated tail pi(t, inf) = int_t^inf w(x) dx, closed form per law.
double integrated_tail(const SubordinatorSpec& spec, double t);

LaplaceExponent laplace_exponent(const SubordinatorSpec& spec);

// kappa(theta) = -psi(-theta) for theta < tilt; DivergentCumulant otherwise.
double cumulant_kappa(const SubordinatorSpec& spec, double theta);

// Risk-neutral drift mu = r - lambda kappa(rho) - sigma^2 / 2 where sigma is
// the stationary mean of the variance process.
ModelParams risk_neutral_params(const SubordinatorSpec& spec, double rho, double lambda,
                                double r);

// Stationary mean of the law's OU invariant distribution (equals the Levy
// density first moment; for BDLP specs this is the paired stationary mean).
double stationary_mean(const SubordinatorSpec& spec);

// One exact draw of Z_{t+dt} - Z_t.
double sample_increment(const SubordinatorSpec& spec, double dt, rng::Stream& stream);

// Inverse Gaussian IG(delta, gamma) density and CDF (mean delta/gamma,
// shape delta^2), shared by the first-passage laws and the marginals.
double ig_density(double delta, double gam, double x);
double ig_cdf(double delta, double gam, double x);

// Marginal law of Z_t: explicit atom at zero (compound-Poisson laws) plus the
// absolutely continuous part. density/survival cover the a.c. part and the
// full tail respectively.
struct Marginal {
  double atom_mass = 0.0;
  std::function<double(double)> density;
  std::function<double(double)> survival;  // P(Z_t > y) for y >= 0
};

Marginal marginal(const SubordinatorSpec& spec, double t);

}  // namespace exitlab::levy
