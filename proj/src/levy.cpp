#include "exitlab/levy.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "exitlab/errors.hpp"
#include "exitlab/kahan.hpp"
#include "exitlab/laplace.hpp"
#include "exitlab/specfun.hpp"

namespace exitlab::levy {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.50662827463100050242;

bool is_gamma(Law law) { return law == Law::GammaStationary || law == Law::GammaBDLP; }
bool is_ig(Law law) { return law == Law::IGStationary || law == Law::IGBDLP; }
bool is_pts(Law law) { return law == Law::PTSStationary || law == Law::PTSBDLP; }
bool is_stationary(Law law) {
  return law == Law::GammaStationary || law == Law::IGStationary || law == Law::PTSStationary;
}

// PTS prefactor a = beta g / (2^g Gamma(g) Gamma(1-g)).
double pts_a(const SubordinatorSpec& s) {
  return s.beta * s.index /
         (std::pow(2.0, s.index) * std::tgamma(s.index) * std::tgamma(1.0 - s.index));
}

double log_erfc(double z) {
  if (z < 25.0) return std::log(std::erfc(z));
  // Asymptotic erfc(z) ~ e^{-z^2}/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4)).
  double z2 = z * z;
  return -z2 - std::log(z * std::sqrt(kPi)) + std::log1p(-0.5 / z2 + 0.75 / (z2 * z2));
}

}  // namespace

SubordinatorSpec SubordinatorSpec::gamma_stationary(double nu, double alpha) {
  SubordinatorSpec s;
  s.law = Law::GammaStationary;
  s.nu = nu;
  s.alpha = alpha;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::gamma_bdlp(double nu, double alpha) {
  SubordinatorSpec s;
  s.law = Law::GammaBDLP;
  s.nu = nu;
  s.alpha = alpha;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::ig_stationary(double delta, double gam) {
  SubordinatorSpec s;
  s.law = Law::IGStationary;
  s.delta = delta;
  s.gam = gam;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::ig_bdlp(double delta, double gam) {
  SubordinatorSpec s;
  s.law = Law::IGBDLP;
  s.delta = delta;
  s.gam = gam;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::pts_stationary(double beta, double index, double k) {
  SubordinatorSpec s;
  s.law = Law::PTSStationary;
  s.beta = beta;
  s.index = index;
  s.k = k;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::pts_bdlp(double beta, double index, double k) {
  SubordinatorSpec s;
  s.law = Law::PTSBDLP;
  s.beta = beta;
  s.index = index;
  s.k = k;
  s.validate();
  return s;
}

void SubordinatorSpec::validate(bool needs_exponent) const {
  if (is_gamma(law)) {
    if (!(nu > 0.0) || !(alpha > 0.0)) {
      throw std::domain_error("gamma law requires nu > 0 and alpha > 0");
    }
  } else if (is_ig(law)) {
    if (!(delta > 0.0) || !(gam > 0.0)) {
      throw std::domain_error("ig law requires delta > 0 and gamma > 0");
    }
  } else {
    if (!(beta > 0.0) || !(index > 0.0) || !(index < 1.0) || !(k >= 0.0)) {
      throw std::domain_error("pts law requires beta > 0, 0 < gamma < 1, k >= 0");
    }
    if (needs_exponent && !(k > 0.0)) {
      throw std::domain_error("pts law requires k > 0 for exponent evaluation and sampling");
    }
  }
}

double SubordinatorSpec::tilt() const {
  if (is_gamma(law)) return alpha;
  if (is_ig(law)) return 0.5 * gam * gam;
  return 0.5 * k * k;
}

std::string SubordinatorSpec::to_string() const {
  char buf[160];
  switch (law) {
    case Law::GammaStationary:
      std::snprintf(buf, sizeof buf, "gamma-stat:nu=%.17g,alpha=%.17g", nu, alpha);
      break;
    case Law::GammaBDLP:
      std::snprintf(buf, sizeof buf, "gamma-bdlp:nu=%.17g,alpha=%.17g", nu, alpha);
      break;
    case Law::IGStationary:
      std::snprintf(buf, sizeof buf, "ig-stat:delta=%.17g,gamma=%.17g", delta, gam);
      break;
    case Law::IGBDLP:
      std::snprintf(buf, sizeof buf, "ig-bdlp:delta=%.17g,gamma=%.17g", delta, gam);
      break;
    case Law::PTSStationary:
      std::snprintf(buf, sizeof buf, "pts-stat:beta=%.17g,gamma=%.17g,k=%.17g", beta, index, k);
      break;
    case Law::PTSBDLP:
      std::snprintf(buf, sizeof buf, "pts-bdlp:beta=%.17g,gamma=%.17g,k=%.17g", beta, index, k);
      break;
  }
  return buf;
}

SubordinatorSpec parse_spec(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ParseError("spec string: expected '<law>:<key>=<value>,...', got '" + text + "'");
  }
  std::string name = text.substr(0, colon);
  SubordinatorSpec spec;
  if (name == "gamma-stat") spec.law = Law::GammaStationary;
  else if (name == "gamma-bdlp") spec.law = Law::GammaBDLP;
  else if (name == "ig-stat") spec.law = Law::IGStationary;
  else if (name == "ig-bdlp") spec.law = Law::IGBDLP;
  else if (name == "pts-stat") spec.law = Law::PTSStationary;
  else if (name == "pts-bdlp") spec.law = Law::PTSBDLP;
  else throw ParseError("spec string: unknown law '" + name + "'");

  std::stringstream rest(text.substr(colon + 1));
  std::string pair;
  while (std::getline(rest, pair, ',')) {
    auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw ParseError("spec string: expected key=value, got '" + pair + "'");
    }
    std::string key = pair.substr(0, eq);
    double value;
    try {
      std::size_t used = 0;
      value = std::stod(pair.substr(eq + 1), &used);
      if (used != pair.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("spec string: key '" + key + "' has a non-numeric value");
    }
    if (is_gamma(spec.law) && key == "nu") spec.nu = value;
    else if (is_gamma(spec.law) && key == "alpha") spec.alpha = value;
    else if (is_ig(spec.law) && key == "delta") spec.delta = value;
    else if (is_ig(spec.law) && key == "gamma") spec.gam = value;
    else if (is_pts(spec.law) && key == "beta") spec.beta = value;
    else if (is_pts(spec.law) && key == "gamma") spec.index = value;
    else if (is_pts(spec.law) && key == "k") spec.k = value;
    else throw ParseError("spec string: key '" + key + "' is not valid for law '" + name + "'");
  }
  try {
    spec.validate();
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("spec string: ") + e.what());
  }
  return spec;
}

void ModelParams::validate() const {
  if (!(sigma > 0.0)) throw std::domain_error("model: sigma must be > 0");
  if (!(lambda > 0.0)) throw std::domain_error("model: lambda must be > 0");
  if (rho >= 0.0) {
    std::fprintf(stderr, "warning: rho = %g >= 0; the leverage case expects rho < 0\n", rho);
  }
}

double levy_density(const SubordinatorSpec& spec, double x) {
  if (!(x > 0.0)) throw std::domain_error("levy_density: requires x > 0");
  switch (spec.law) {
    case Law::GammaStationary:
      return spec.nu / x * std::exp(-spec.alpha * x);
    case Law::GammaBDLP:
      return spec.nu * spec.alpha * std::exp(-spec.alpha * x);
    case Law::IGStationary:
      return spec.delta / kSqrt2Pi * std::pow(x, -1.5) * std::exp(-0.5 * spec.gam * spec.gam * x);
    case Law::IGBDLP:
      return spec.delta / (2.0 * kSqrt2Pi) * std::pow(x, -1.5) *
             (1.0 + spec.gam * spec.gam * x) * std::exp(-0.5 * spec.gam * spec.gam * x);
    case Law::PTSStationary: {
      double c = spec.beta * std::pow(spec.k, -2.0 * spec.index) * spec.index /
                 (std::tgamma(spec.index) * std::tgamma(1.0 - spec.index));
      return c * std::pow(x, -spec.index - 1.0) * std::exp(-0.5 * spec.k * spec.k * x);
    }
    case Law::PTSBDLP: {
      double c = spec.beta * std::pow(spec.k, -2.0 * spec.index) * spec.index /
                 (std::tgamma(spec.index) * std::tgamma(1.0 - spec.index));
      return c * std::pow(x, -spec.index - 1.0) * std::exp(-0.5 * spec.k * spec.k * x) *
             (spec.index + 0.5 * spec.k * spec.k * x);
    }
  }
  return 0.0;
}

double stationary_levy_density_prime(const SubordinatorSpec& spec, double x) {
  if (!(x > 0.0)) throw std::domain_error("stationary_levy_density_prime: requires x > 0");
  if (!is_stationary(spec.law)) {
    throw std::domain_error("stationary_levy_density_prime: spec is not a stationary law");
  }
  double u = levy_density(spec, x);
  switch (spec.law) {
    case Law::GammaStationary:
      return u * (-1.0 / x - spec.alpha);
    case Law::IGStationary:
      return u * (-1.5 / x - 0.5 * spec.gam * spec.gam);
    case Law::PTSStationary:
      return u * (-(spec.index + 1.0) / x - 0.5 * spec.k * spec.k);
    default:
      return 0.0;
  }
}

std::function<double(double)> bdlp_from_stationary(std::function<double(double)> u,
                                                   std::function<double(double)> u_prime) {
  return [u = std::move(u), u_prime = std::move(u_prime)](double x) {
    return -u(x) - x * u_prime(x);
  };
}

double integrated_tail(const SubordinatorSpec& spec, double t) {
  if (!(t > 0.0)) throw std::domain_error("integrated_tail: requires t > 0");
  switch (spec.law) {
    case Law::GammaStationary:
      return spec.nu * specfun::gamma_upper(0.0, spec.alpha * t);
    case Law::GammaBDLP:
      return spec.nu * std::exp(-spec.alpha * t);
    case Law::IGStationary: {
      double c = 0.5 * spec.gam * spec.gam;
      return spec.delta * std::sqrt(2.0 / (kPi * t)) * std::exp(-c * t) -
             spec.delta * spec.gam * specfun::erfc(spec.gam * std::sqrt(0.5 * t));
    }
    case Law::IGBDLP: {
      // erf / Gamma(-1/2, .) form of the integrated tail.
      double z = 0.5 * spec.gam * spec.gam * t;
      return -0.5 * spec.delta * spec.gam * specfun::erf(spec.gam * std::sqrt(0.5 * t)) +
             0.5 * spec.delta * spec.gam +
             specfun::gamma_upper(-0.5, z) * spec.delta * spec.gam / (4.0 * std::sqrt(kPi));
    }
    case Law::PTSStationary:
      return pts_a(spec) * specfun::gamma_upper(-spec.index, 0.5 * spec.k * spec.k * t);
    case Law::PTSBDLP: {
      double z = 0.5 * spec.k * spec.k * t;
      return pts_a(spec) * (spec.index * specfun::gamma_upper(-spec.index, z) +
                            specfun::gamma_upper(1.0 - spec.index, z));
    }
  }
  return 0.0;
}

LaplaceExponent laplace_exponent(const SubordinatorSpec& spec) {
  spec.validate(true);
  LaplaceExponent exponent;
  exponent.spec = spec;
  exponent.tilt = spec.tilt();
  switch (spec.law) {
    case Law::GammaStationary: {
      double nu = spec.nu, alpha = spec.alpha;
      exponent.evaluator = [nu, alpha](Complex s) { return nu * std::log(1.0 + s / alpha); };
      break;
    }
    case Law::GammaBDLP: {
      double nu = spec.nu, alpha = spec.alpha;
      exponent.evaluator = [nu, alpha](Complex s) { return nu * s / (s + alpha); };
      break;
    }
    case Law::IGStationary: {
      double delta = spec.delta, g = spec.gam;
      exponent.evaluator = [delta, g](Complex s) {
        return delta * (std::sqrt(2.0 * s + g * g) - g);
      };
      break;
    }
    case Law::IGBDLP: {
      // psi(s) = (delta/2) R - delta g^2 / (2 R), R = sqrt(2s + g^2).
      double delta = spec.delta, g = spec.gam;
      exponent.evaluator = [delta, g](Complex s) {
        Complex R = std::sqrt(2.0 * s + g * g);
        return 0.5 * delta * (R - g * g / R);
      };
      break;
    }
    case Law::PTSStationary: {
      double a = pts_a(spec), g = spec.index, k = spec.k;
      double gneg = std::tgamma(-g + 1.0) / (-g);  // Gamma(-g) via recurrence
      exponent.evaluator = [a, g, k, gneg](Complex s) {
        return a * gneg * (1.0 - std::pow(1.0 + 2.0 * s / (k * k), g));
      };
      break;
    }
    case Law::PTSBDLP: {
      double a = pts_a(spec), g = spec.index, k = spec.k;
      double gneg = std::tgamma(-g + 1.0) / (-g);
      double g1 = std::tgamma(1.0 - g);
      exponent.evaluator = [a, g, k, gneg, g1](Complex s) {
        Complex xi = 1.0 + 2.0 * s / (k * k);
        return a * (g * gneg * (1.0 - std::pow(xi, g)) + g1 * (1.0 - std::pow(xi, g - 1.0)));
      };
      break;
    }
  }
  return exponent;
}

double LaplaceExponent::mean() const {
  const SubordinatorSpec& s = spec;
  switch (s.law) {
    case Law::GammaStationary:
    case Law::GammaBDLP:
      return s.nu / s.alpha;
    case Law::IGStationary:
    case Law::IGBDLP:
      return s.delta / s.gam;
    case Law::PTSStationary:
    case Law::PTSBDLP:
      return pts_a(s) * std::tgamma(1.0 - s.index) * 2.0 / (s.k * s.k);
  }
  return 0.0;
}

double LaplaceExponent::variance() const {
  const SubordinatorSpec& s = spec;
  switch (s.law) {
    case Law::GammaStationary:
      return s.nu / (s.alpha * s.alpha);
    case Law::GammaBDLP:
      return 2.0 * s.nu / (s.alpha * s.alpha);
    case Law::IGStationary:
      return s.delta / (s.gam * s.gam * s.gam);
    case Law::IGBDLP:
      return 2.0 * s.delta / (s.gam * s.gam * s.gam);
    case Law::PTSStationary:
      return pts_a(s) * std::tgamma(2.0 - s.index) * 4.0 / (s.k * s.k * s.k * s.k);
    case Law::PTSBDLP:
      return pts_a(s) * std::tgamma(2.0 - s.index) * 8.0 / (s.k * s.k * s.k * s.k);
  }
  return 0.0;
}

double cumulant_kappa(const SubordinatorSpec& spec, double theta) {
  spec.validate(true);
  if (theta >= spec.tilt()) {
    throw DivergentCumulant("cumulant_kappa: theta >= exponential tilt, integral diverges");
  }
  if (theta == 0.0) return 0.0;
  LaplaceExponent psi = laplace_exponent(spec);
  return -psi(-theta);
}

double stationary_mean(const SubordinatorSpec& spec) {
  // Mean is shared between a stationary law and its BDLP partner.
  return laplace_exponent(spec).mean();
}

ModelParams risk_neutral_params(const SubordinatorSpec& spec, double rho, double lambda,
                                double r) {
  ModelParams m;
  m.rho = rho;
  m.lambda = lambda;
  m.r = r;
  m.sigma = stationary_mean(spec);
  m.mu = r - lambda * cumulant_kappa(spec, rho) - 0.5 * m.sigma * m.sigma;
  m.validate();
  return m;
}

namespace {

// Tilted one-sided-stable increment via rejection; dt is split so the
// per-chunk acceptance probability stays >= e^-1 (expected loops <= e).
double sample_pts_increment(double beta, double g, double k, double dt, rng::Stream& stream) {
  const double tilt_cost = beta / (std::pow(2.0, g) * std::tgamma(g));  // = dt-rate of -log acceptance
  const int chunks = std::max(1, static_cast<int>(std::ceil(dt * tilt_cost)));
  const double dtc = dt / chunks;
  const double scale = std::pow(dtc * beta * std::pow(k, -2.0 * g) / std::tgamma(g), 1.0 / g);
  const double theta = 0.5 * k * k;
  double total = 0.0;
  for (int i = 0; i < chunks; ++i) {
    for (;;) {
      double x = scale * stream.next_stable_onesided(g);
      if (stream.next_u01() <= std::exp(-theta * x)) {
        total += x;
        break;
      }
    }
  }
  return total;
}

}  // namespace

double sample_increment(const SubordinatorSpec& spec, double dt, rng::Stream& stream) {
  if (!(dt > 0.0)) throw std::domain_error("sample_increment: requires dt > 0");
  spec.validate(true);
  switch (spec.law) {
    case Law::GammaStationary:
      return stream.next_gamma(spec.nu * dt, spec.alpha);
    case Law::GammaBDLP: {
      std::uint64_t n = stream.next_poisson(spec.nu * dt);
      return n == 0 ? 0.0 : stream.next_gamma(static_cast<double>(n), spec.alpha);
    }
    case Law::IGStationary:
      return stream.next_inverse_gaussian(spec.delta * dt, spec.gam);
    case Law::IGBDLP: {
      // w splits into an IG-type x^-3/2 part (delta/2) and a finite-activity
      // part with gamma(1/2, gamma^2/2) jumps at rate delta gamma / 2.
      double inc = stream.next_inverse_gaussian(0.5 * spec.delta * dt, spec.gam);
      std::uint64_t n = stream.next_poisson(0.5 * spec.delta * spec.gam * dt);
      if (n > 0) inc += stream.next_gamma(0.5 * static_cast<double>(n), 0.5 * spec.gam * spec.gam);
      return inc;
    }
    case Law::PTSStationary:
      return sample_pts_increment(spec.beta, spec.index, spec.k, dt, stream);
    case Law::PTSBDLP: {
      // gamma * u_pts part plus gamma(1-g, k^2/2) jumps at rate a Gamma(1-g).
      double inc = sample_pts_increment(spec.beta * spec.index, spec.index, spec.k, dt, stream);
      double cp_rate = pts_a(spec) * std::tgamma(1.0 - spec.index);
      std::uint64_t n = stream.next_poisson(cp_rate * dt);
      if (n > 0) {
        inc += stream.next_gamma((1.0 - spec.index) * static_cast<double>(n), 0.5 * spec.k * spec.k);
      }
      return inc;
    }
  }
  return 0.0;
}

double ig_density(double delta, double gam, double x) {
  if (x <= 0.0) return 0.0;
  return delta / kSqrt2Pi * std::exp(delta * gam) * std::pow(x, -1.5) *
         std::exp(-0.5 * (delta * delta / x + gam * gam * x));
}

double ig_cdf(double delta, double gam, double x) {
  if (x <= 0.0) return 0.0;
  double sx = std::sqrt(x);
  double z1 = (gam * x - delta) / sx;
  double z2 = (gam * x + delta) / sx;
  double cdf = 0.5 * std::erfc(-z1 / std::sqrt(2.0)) +
               0.5 * std::exp(2.0 * delta * gam + log_erfc(z2 / std::sqrt(2.0)));
  return std::min(1.0, std::max(0.0, cdf));
}

namespace {

Marginal gamma_stationary_marginal(const SubordinatorSpec& spec, double t) {
  const double shape = spec.nu * t;
  const double rate = spec.alpha;
  Marginal m;
  m.atom_mass = 0.0;
  m.density = [shape, rate](double y) {
    if (y <= 0.0) return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(y) - rate * y -
                    std::lgamma(shape));
  };
  m.survival = [shape, rate](double y) {
    if (y <= 0.0) return 1.0;
    return specfun::gamma_upper(shape, rate * y) / std::tgamma(shape);
  };
  return m;
}

Marginal gamma_bdlp_marginal(const SubordinatorSpec& spec, double t) {
  const double nu = spec.nu, alpha = spec.alpha;
  const double rate_t = nu * t;
  Marginal m;
  m.atom_mass = std::exp(-rate_t);
  m.density = [nu, alpha, rate_t](double y) {
    if (y <= 0.0) return 0.0;
    // sum_n pois(n) gamma(n, alpha) = e^{-nu t - alpha y} sqrt(nu alpha t / y) I_1(2 sqrt(nu alpha t y))
    double z = 2.0 * std::sqrt(rate_t * alpha * y);
    double logs = z - rate_t - alpha * y;  // z <= rate_t + alpha y, so logs <= 0
    return std::sqrt(rate_t * alpha / y) * specfun::bessel_i1_scaled(z) * std::exp(logs);
  };
  m.survival = [alpha, rate_t](double y) {
    if (y <= 0.0) return 1.0;
    // sum_{n>=1} pois(n) Q(n, alpha y), with Q(n+1,z) = Q(n,z) + z^n e^-z / n!.
    double z = alpha * y;
    double pois = std::exp(-rate_t);  // pmf at n=0, advanced in the loop
    double q = std::exp(-z);          // Q(1, z)
    double pterm = std::exp(-z);      // z^(n-1) e^-z / (n-1)! for n=1
    KahanReal sum;
    int nmax = static_cast<int>(rate_t + 12.0 * std::sqrt(rate_t + 1.0) + 25.0);
    for (int n = 1; n <= nmax; ++n) {
      pois *= rate_t / n;
      sum.add(pois * q);
      pterm *= z / n;
      q += pterm;  // Q(n+1, z)
    }
    return sum.value();
  };
  return m;
}

Marginal ig_stationary_marginal(const SubordinatorSpec& spec, double t) {
  const double d = spec.delta * t;
  const double g = spec.gam;
  Marginal m;
  m.atom_mass = 0.0;
  m.density = [d, g](double y) { return ig_density(d, g, y); };
  m.survival = [d, g](double y) {
    if (y <= 0.0) return 1.0;
    return std::max(0.0, 1.0 - ig_cdf(d, g, y));
  };
  return m;
}

Marginal inversion_marginal(const SubordinatorSpec& spec, double t) {
  auto psi = std::make_shared<LaplaceExponent>(laplace_exponent(spec));
  Marginal m;
  m.atom_mass = 0.0;
  laplace::InversionSettings settings;
  settings.method = laplace::InversionMethod::Talbot;
  settings.order = 32;
  m.density = [psi, t, settings](double y) {
    if (y <= 0.0) return 0.0;
    laplace::TransformFn tf{[psi, t](Complex s) { return std::exp(-t * (*psi)(s)); }, 0.0};
    double v = laplace::invert_at(tf, y, settings);
    return std::max(0.0, v);
  };
  m.survival = [psi, t, settings](double y) {
    if (y <= 0.0) return 1.0;
    laplace::TransformFn tf{[psi, t](Complex s) { return std::exp(-t * (*psi)(s)) / s; }, 0.0};
    double cdf = laplace::invert_at(tf, y, settings);
    return std::min(1.0, std::max(0.0, 1.0 - cdf));
  };
  return m;
}

}  // namespace

Marginal marginal(const SubordinatorSpec& spec, double t) {
  if (!(t > 0.0)) throw std::domain_error("marginal: requires t > 0");
  switch (spec.law) {
    case Law::GammaStationary:
      return gamma_stationary_marginal(spec, t);
    case Law::GammaBDLP:
      return gamma_bdlp_marginal(spec, t);
    case Law::IGStationary:
      return ig_stationary_marginal(spec, t);
    case Law::IGBDLP:
    case Law::PTSStationary:
    case Law::PTSBDLP:
      spec.validate(true);
      return inversion_marginal(spec, t);
  }
  throw MarginalUnavailable("marginal: no density route for this spec");
}

}  // namespace exitlab::levy
