#include "exitlab/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "exitlab/errors.hpp"
#include "exitlab/kahan.hpp"
#include "exitlab/quadrature.hpp"
#include "exitlab/specfun.hpp"

namespace exitlab::laplace {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

std::vector<double> stehfest_weights(int order) {
  // zeta_k = (-1)^{n+k} sum_j j^{n+1}/n! C(n,j) C(2j,j) C(j,k-j), n = order/2.
  const int n = order / 2;
  auto binom = [](int a, int b) -> long double {
    if (b < 0 || b > a) return 0.0L;
    long double r = 1.0L;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  long double nfact = 1.0L;
  for (int i = 2; i <= n; ++i) nfact *= i;
  std::vector<double> w(order + 1, 0.0);
  for (int k = 1; k <= order; ++k) {
    long double acc = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, n); ++j) {
      long double term = 1.0L;
      for (int i = 0; i < n + 1; ++i) term *= j;
      term = term / nfact * binom(n, j) * binom(2 * j, j) * binom(j, k - j);
      acc += term;
    }
    if ((n + k) % 2 != 0) acc = -acc;
    w[k] = static_cast<double>(acc);
  }
  return w;
}

double invert_gaver_stehfest(const TransformFn& F, double t, int order) {
  static thread_local int cached_order = 0;
  static thread_local std::vector<double> cached_weights;
  if (cached_order != order) {
    cached_weights = stehfest_weights(order);
    cached_order = order;
  }
  const double a = kLn2 / t;
  KahanReal sum;
  double max_term = 0.0;
  for (int k = 1; k <= order; ++k) {
    Complex fs = F.evaluator(Complex(a * k, 0.0));
    double term = cached_weights[k] * fs.real();
    max_term = std::max(max_term, std::abs(term));
    sum.add(term);
  }
  double value = a * sum.value();
  // All significant digits cancel when the alternating terms dwarf the sum.
  if (max_term > 0.0 && std::abs(sum.value()) < 1e-12 * max_term &&
      std::abs(sum.value()) > 0.0) {
    throw NumericalBlowup("gaver-stehfest: alternating sum lost all significant digits");
  }
  return value;
}

double invert_talbot(const TransformFn& F, double t, int order) {
  // Fixed-parameter modified Talbot contour (Abate-Whitt), M = order nodes.
  // Node coefficients and the accumulation run in extended precision: the
  // e^{2M/5}-sized contour factors otherwise pin the double-precision floor
  // near 1e-10 relative.
  using CLD = std::complex<long double>;
  const long double pi_ld = 3.14159265358979323846264338328L;
  const int M = order;
  CLD sum(0.0L, 0.0L);
  for (int k = 0; k < M; ++k) {
    CLD delta, gamma;
    if (k == 0) {
      delta = CLD(2.0L * M / 5.0L, 0.0L);
      gamma = 0.5L * std::exp(delta);
    } else {
      const long double theta = k * pi_ld / M;
      const long double cot = std::cos(theta) / std::sin(theta);
      delta = 2.0L * pi_ld / 5.0L * k * CLD(cot, 1.0L);
      gamma = (1.0L + CLD(0.0L, theta * (1.0L + cot * cot) - cot)) * std::exp(delta);
    }
    CLD s_node = delta / static_cast<long double>(t);
    Complex fs = F.evaluator(Complex(static_cast<double>(s_node.real()),
                                     static_cast<double>(s_node.imag())));
    sum += gamma * CLD(fs.real(), fs.imag());
  }
  return static_cast<double>(0.4L / t * sum.real());
}

}  // namespace

TransformFn make_transform(std::function<Complex(Complex)> evaluator, double abscissa) {
  TransformFn tf{std::move(evaluator), abscissa};
  const double base = abscissa + std::max(1.0, std::abs(abscissa));
  for (double mult : {1.0, 4.0, 16.0}) {
    Complex probe = tf.evaluator(Complex(base * mult, 0.0));
    if (!std::isfinite(probe.real()) || !std::isfinite(probe.imag())) {
      throw std::domain_error("make_transform: evaluator not finite right of the abscissa");
    }
  }
  return tf;
}

double invert_at(const TransformFn& F, double t, const InversionSettings& settings) {
  if (!(t > 0.0)) throw std::domain_error("invert_at: requires t > 0");
  // A declared negative abscissa means f carries a factor e^{abscissa t};
  // inverting the shifted transform and restoring the factor afterwards keeps
  // the node sums conditioned on the scale of e^{-abscissa t} f(t).
  if (F.abscissa < 0.0) {
    TransformFn shifted;
    const double shift = F.abscissa;
    auto inner = F.evaluator;
    shifted.evaluator = [inner, shift](Complex s) { return inner(s + shift); };
    shifted.abscissa = 0.0;
    return std::exp(shift * t) * invert_at(shifted, t, settings);
  }
  if (settings.method == InversionMethod::GaverStehfest) {
    if (settings.order < 8 || settings.order > 18 || settings.order % 2 != 0) {
      throw std::domain_error("invert_at: gaver-stehfest order must be even in [8, 18]");
    }
    return invert_gaver_stehfest(F, t, settings.order);
  }
  if (settings.order < 16 || settings.order > 64) {
    throw std::domain_error("invert_at: talbot order must lie in [16, 64]");
  }
  return invert_talbot(F, t, settings.order);
}

DensityCurve invert(const TransformFn& F, const InversionSettings& settings) {
  if (!settings.grid.valid() || settings.grid.start + settings.grid.step <= 0.0) {
    throw std::domain_error("invert: grid must cover strictly positive t");
  }
  return sample_density(settings.grid, [&](double t) {
    if (t <= 0.0) return 0.0;  // grid may start at 0; the density is left-limited there
    return invert_at(F, t, settings);
  });
}

ForwardResult forward(const std::function<double(double)>& f, Complex s,
                      const TailBound* tail) {
  TailBound bound;
  if (tail) {
    bound = *tail;
  } else {
    // Probe a dyadic window for decay and fit a crude exponential envelope.
    double t0 = 1.0;
    double m0 = 0.0;
    for (double t = t0; t <= 128.0; t *= 2.0) m0 = std::max(m0, std::abs(f(t)));
    double m1 = 0.0;
    for (double t = 256.0; t <= 1024.0; t *= 2.0) m1 = std::max(m1, std::abs(f(t)));
    if (m1 >= m0 && m1 > 0.0) {
      throw TailUnbounded("forward: no tail bound supplied and f does not decay on the probe window");
    }
    bound.from = 256.0;
    bound.scale = std::max(m0, m1);
    bound.rate = 0.0;
  }
  const double sigma = s.real();
  if (sigma + bound.rate <= 0.0) {
    throw std::domain_error("forward: Re(s) + tail rate must be positive");
  }
  // Truncation point where the analytic tail drops below target accuracy.
  double T = std::max(bound.from, 1.0);
  double tail_err = bound.scale * std::exp(-(sigma + bound.rate) * T) / (sigma + bound.rate);
  while (tail_err > 1e-14 && T < 1e6) {
    T *= 1.5;
    tail_err = bound.scale * std::exp(-(sigma + bound.rate) * T) / (sigma + bound.rate);
  }
  quadrature::Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-11;
  opts.max_intervals = 4000;
  auto re = quadrature::integrate(
      [&](double t) { return f(t) * std::exp(-sigma * t) * std::cos(s.imag() * t); }, 0.0, T, opts);
  ForwardResult out;
  if (s.imag() == 0.0) {
    out.value = Complex(re.value, 0.0);
    out.error = re.error + tail_err;
    return out;
  }
  auto im = quadrature::integrate(
      [&](double t) { return -f(t) * std::exp(-sigma * t) * std::sin(s.imag() * t); }, 0.0, T, opts);
  out.value = Complex(re.value, im.value);
  out.error = re.error + im.error + tail_err;
  return out;
}

TransformFn exit_density_transform(const ExponentFn& psi, double x) {
  if (!(x > 0.0)) throw std::domain_error("exit_density_transform: requires x > 0");
  return make_transform(
      [psi, x](Complex s) {
        Complex p = psi(s);
        return p * std::exp(-x * p) / s;
      },
      0.0);
}

TransformFn moment_transform(const ExponentFn& psi, double q) {
  if (!(q > 0.0)) throw std::domain_error("moment_transform: requires q > 0");
  const double coeff = q * specfun::gamma_fn(1.0 + q);
  TransformFn tf;
  tf.evaluator = [psi, q, coeff](Complex s) {
    return coeff / (s * std::pow(psi(s), q));
  };
  tf.abscissa = 1e-12;  // psi vanishes only at s = 0
  return tf;
}

}  // namespace exitlab::laplace
