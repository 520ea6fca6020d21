#include "exitlab/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "exitlab/errors.hpp"
#include "exitlab/kahan.hpp"

namespace exitlab::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Lower regularized-series part: gamma_lower(a,x) = x^a e^-x sum x^n / (a)_{n+1}.
double gamma_lower_series(double a, double x) {
  KahanReal sum;
  double term = 1.0 / a;
  sum.add(term);
  for (int n = 1; n < 600; ++n) {
    term *= x / (a + n);
    sum.add(term);
    if (std::abs(term) < std::abs(sum.value()) * kEps) {
      return sum.value() * std::exp(a * std::log(x) - x);
    }
  }
  throw NonConvergence("gamma_lower_series: no convergence");
}

// Gamma(a,x) = x^a e^-x / (x + 1 - a - 1(1-a)/(x + 3 - a - 2(2-a)/(...)))
// via modified Lentz.
double gamma_upper_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 600; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return h * std::exp(a * std::log(x) - x);
    }
  }
  throw NonConvergence("gamma_upper_cf: no convergence");
}

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x) {
  if (x <= 1.0) {
    // -gamma - ln x + sum (-1)^{n+1} x^n / (n n!)
    constexpr double kEulerGamma = 0.57721566490153286060651209;
    KahanReal sum;
    double term = 1.0;
    for (int n = 1; n < 60; ++n) {
      term *= -x / n;
      sum.add(-term / n);
      if (std::abs(term / n) < kEps) break;
    }
    return -kEulerGamma - std::log(x) + sum.value();
  }
  // Continued fraction e^-x/(x+1 - 1/(x+3 - 4/(x+5 - ...)))
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 400; ++i) {
    double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x);
}

double gamma_upper_positive(double a, double x) {
  if (x > a + 1.0) return gamma_upper_cf(a, x);
  return std::tgamma(a) - gamma_lower_series(a, x);
}

}  // namespace

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    throw PoleError("gamma_fn: pole at non-positive integer argument");
  }
  return std::tgamma(x);
}

double lgamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    throw PoleError("lgamma_fn: pole at non-positive integer argument");
  }
  return std::lgamma(x);
}

Complex gamma_fn(Complex z) {
  // Lanczos approximation, g = 7, 9 coefficients; reflection for Re z < 0.5.
  static const double kLanczos[9] = {
      0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real())) {
      throw PoleError("gamma_fn: pole at non-positive integer argument");
    }
    constexpr double kPi = 3.14159265358979323846;
    return kPi / (std::sin(kPi * z) * gamma_fn(1.0 - z));
  }
  z -= 1.0;
  Complex acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
  Complex t = z + 7.5;
  constexpr double kSqrt2Pi = 2.5066282746310002;
  return kSqrt2Pi * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double gamma_upper(double a, double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("gamma_upper: requires x > 0");
  }
  if (a > 0.0) return gamma_upper_positive(a, x);

  // Downward recurrence Gamma(b,x) = (Gamma(b+1,x) - x^b e^-x) / b, started
  // at a + ceil(-a) + 1 in the positive region; the b = 0 rung is the
  // exponential integral and is taken directly.
  int m = static_cast<int>(std::ceil(-a)) + 1;
  double top = a + m;
  double value = top > 0.0 ? gamma_upper_positive(top, x) : expint_e1(x);
  for (int k = 1; k <= m; ++k) {
    double b = top - k;
    if (b == 0.0) {
      value = expint_e1(x);
    } else {
      value = (value - std::exp(b * std::log(x) - x)) / b;
    }
  }
  return value;
}

namespace {

// Power series sum_k (x/2)^{2k+nu} / (k! (k+nu)!), nu in {0,1}; all terms
// positive, no cancellation. Adequate relative error through x ~ 50.
double bessel_series(int nu, double x) {
  double half = 0.5 * x;
  KahanReal sum;
  double term = nu == 0 ? 1.0 : half;
  sum.add(term);
  double q = half * half;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum.add(term);
    if (term < sum.value() * kEps) break;
  }
  return sum.value();
}

// Scaled asymptotic expansion e^-x I_nu(x) ~ (2 pi x)^{-1/2} sum_k a_k, for
// large x; truncated at the smallest term.
double bessel_scaled_asymptotic(int nu, double x) {
  double mu = 4.0 * nu * nu;
  KahanReal sum;
  double term = 1.0;
  sum.add(term);
  double prev = std::abs(term);
  for (int k = 0; k < 40; ++k) {
    double num = mu - (2.0 * k + 1.0) * (2.0 * k + 1.0);
    term *= -num / (8.0 * (k + 1.0) * x);
    if (std::abs(term) >= prev) break;  // asymptotic tail started growing
    sum.add(term);
    prev = std::abs(term);
    if (prev < kEps) break;
  }
  return sum.value() / std::sqrt(2.0 * 3.14159265358979323846 * x);
}

constexpr double kBesselSeriesCutoff = 50.0;
constexpr double kExpOverflow = 709.0;

}  // namespace

double bessel_i0_scaled(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i0_scaled: requires x >= 0");
  if (x <= kBesselSeriesCutoff) return bessel_series(0, x) * std::exp(-x);
  return bessel_scaled_asymptotic(0, x);
}

double bessel_i1_scaled(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i1_scaled: requires x >= 0");
  if (x <= kBesselSeriesCutoff) return bessel_series(1, x) * std::exp(-x);
  return bessel_scaled_asymptotic(1, x);
}

double bessel_i0(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i0: requires x >= 0");
  if (x <= kBesselSeriesCutoff) return bessel_series(0, x);
  if (x > kExpOverflow) {
    throw std::overflow_error("bessel_i0: e^x I_0 scale exceeds double range; use bessel_i0_scaled");
  }
  return bessel_scaled_asymptotic(0, x) * std::exp(x);
}

double bessel_i1(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i1: requires x >= 0");
  if (x <= kBesselSeriesCutoff) return bessel_series(1, x);
  if (x > kExpOverflow) {
    throw std::overflow_error("bessel_i1: e^x I_1 scale exceeds double range; use bessel_i1_scaled");
  }
  return bessel_scaled_asymptotic(1, x) * std::exp(x);
}

double bessel_i0_prime(double x) { return bessel_i1(x); }

double hyp2f1_terminating(int n, double c, double x) {
  if (n < 0) throw std::domain_error("hyp2f1_terminating: requires n >= 0");
  // (c)_k vanishes for some k <= n iff c in {0, -1, ..., -(n-1)}.
  if (c <= 0.0 && c == std::floor(c) && -c < static_cast<double>(n)) {
    throw PoleError("hyp2f1_terminating: Pochhammer (c)_k vanishes in the denominator");
  }
  long double sum = 1.0L;
  long double term = 1.0L;
  for (int k = 0; k < n; ++k) {
    long double num = static_cast<long double>(-n + k);
    term *= num * num * x / ((static_cast<long double>(c) + k) * (k + 1));
    sum += term;
  }
  return static_cast<double>(sum);
}

PFQResult pfq(const PFQParams& params, int max_terms, double tol) {
  KahanComplex sum;
  Complex term = 1.0;
  sum.add(term);
  double max_abs_term = 1.0;
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_terms; ++k) {
    Complex factor = params.argument / static_cast<double>(k + 1);
    bool terminated = false;
    for (const Complex& a : params.upper) {
      Complex p = a + static_cast<double>(k);
      if (p == Complex(0.0)) terminated = true;
      factor *= p;
    }
    if (terminated) {
      return {sum.value(), kEps * max_abs_term, k + 1};
    }
    for (const Complex& b : params.lower) {
      Complex p = b + static_cast<double>(k);
      if (p == Complex(0.0)) {
        throw PoleError("pfq: lower parameter hits a non-positive integer before termination");
      }
      factor /= p;
    }
    term *= factor;
    sum.add(term);
    double at = std::abs(term);
    max_abs_term = std::max(max_abs_term, at);
    double ratio = std::abs(factor);
    if (at <= tol * std::abs(sum.value()) && ratio < 1.0 && prev_ratio < 1.0) {
      double tail = at * ratio / (1.0 - ratio);
      return {sum.value(), tail + kEps * max_abs_term, k + 2};
    }
    prev_ratio = ratio;
  }
  throw NonConvergence("pfq: series did not converge within the term budget");
}

namespace {

// Residue-series branch of E(a_1..a_m :: x) for m >= 2 (n = 0): converges for
// all x != 0. Returns value and a significance-loss estimate.
std::pair<Complex, double> macrobert_branch_small(const std::vector<Complex>& a, Complex x) {
  const int m = static_cast<int>(a.size());
  Complex log_x = std::log(x);
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  KahanComplex total;
  double err = 0.0;
  for (int i = 0; i < m; ++i) {
    Complex coeff = gamma_fn(a[i]);
    PFQParams inner;
    inner.upper = {a[i]};
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      coeff *= gamma_fn(a[j] - a[i]);
      inner.lower.push_back(a[i] - a[j] + 1.0);
    }
    inner.argument = sign * x;
    PFQResult r = pfq(inner, 4000, 1e-16);
    Complex contrib = coeff * std::exp(a[i] * log_x) * r.value;
    total.add(contrib);
    err += std::abs(coeff * std::exp(a[i] * log_x)) * r.error_estimate;
  }
  return {total.value(), err};
}

// m = 1 branch pair: Gamma(a) x^a (1+x)^-a for |x| < 1, Gamma(a) (1+1/x)^-a
// for |x| > 1 (these agree analytically; the series forms differ in
// conditioning near |x| = 1).
std::pair<Complex, double> macrobert_m1(Complex a, Complex x, bool small_branch) {
  Complex g = gamma_fn(a);
  PFQParams geo;
  geo.upper = {a};
  if (small_branch) {
    geo.argument = -x;
    PFQResult r = pfq(geo, 4000, 1e-16);
    Complex val = g * std::exp(a * std::log(x)) * r.value;
    return {val, std::abs(g) * r.error_estimate};
  }
  geo.argument = -1.0 / x;
  PFQResult r = pfq(geo, 4000, 1e-16);
  return {g * r.value, std::abs(g) * r.error_estimate};
}

}  // namespace

Complex macrobert_e(const std::vector<Complex>& a_list, Complex x) {
  if (a_list.empty()) throw std::domain_error("macrobert_e: empty parameter list");
  if (x == Complex(0.0)) throw std::domain_error("macrobert_e: x = 0");
  const double ax = std::abs(x);
  Complex value;
  double err;
  if (a_list.size() == 1) {
    if (std::abs(ax - 1.0) < 0.2) {
      // Both series are marginal near |x| = 1; take whichever converges with
      // the smaller internal estimate.
      std::pair<Complex, double> best{Complex(0.0), std::numeric_limits<double>::infinity()};
      for (bool small_branch : {true, false}) {
        try {
          auto candidate = macrobert_m1(a_list[0], x, small_branch);
          if (candidate.second < best.second) best = candidate;
        } catch (const NonConvergence&) {
        }
      }
      if (!std::isfinite(best.second)) {
        throw NonConvergence("macrobert_e: both branch series fail near |x| = 1");
      }
      std::tie(value, err) = best;
    } else {
      std::tie(value, err) = macrobert_m1(a_list[0], x, ax < 1.0);
    }
  } else {
    std::tie(value, err) = macrobert_branch_small(a_list, x);
  }
  if (!(err <= 1e-7 * std::abs(value)) && !(err < 1e-280)) {
    throw NonConvergence("macrobert_e: series significance loss near the branch boundary");
  }
  return value;
}

double macrobert_e_conjugate_pair(const std::vector<double>& a_list, double x) {
  if (!(x > 0.0)) throw std::domain_error("macrobert_e_conjugate_pair: requires x > 0");
  std::vector<Complex> a(a_list.begin(), a_list.end());
  // x e^{i pi}: the upper side of the negative real axis; the i -> -i partner
  // is the conjugate, so the pair sum (1/i)(E - conj E) = 2 Im E.
  Complex val = macrobert_e(a, Complex(-x, 0.0));
  return 2.0 * val.imag();
}

}  // namespace exitlab::specfun
