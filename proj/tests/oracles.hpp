#pragma once

// Test-only oracles. Everything here is deliberately independent of the
// library's evaluation paths: plain Taylor series, adaptive Simpson
// quadrature, exact rational arithmetic, and a fully specified mt19937_64
// sampler (never the library RNG or kernels).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// erf by Maclaurin series in extended precision.
inline double erf_series(double x) {
  long double z = x;
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    long double add = term / (2 * n + 1);
    sum += add;
    if (std::abs((double)add) < 1e-22 * std::abs((double)sum)) break;
  }
  return static_cast<double>(sum * 2.0L / std::sqrt((long double)kPi));
}

// Adaptive Simpson on [a, b].
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 24) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// [a, inf) via t = a + u/(1-u).
inline double integrate_to_inf(const std::function<double(double)>& f, double a,
                               double tol = 1e-12, int depth = 24) {
  auto g = [&](double u) {
    double um = 1.0 - u;
    return f(a + u / um) / (um * um);
  };
  return integrate(g, 1e-14, 1.0 - 1e-9, tol, depth);
}

// Upper incomplete gamma by quadrature of the defining integral.
inline double gamma_upper(double a, double x) {
  return integrate_to_inf([a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, x,
                          1e-13);
}

// int_lo^hi f with the substitution y = u^5, taming integrable power
// singularities at the left endpoint.
inline double integrate_power_stretched(const std::function<double(double)>& f, double lo,
                                        double hi, double tol = 1e-9, int depth = 20) {
  auto g = [&](double u) {
    double u2 = u * u;
    double y = u2 * u2 * u;
    return f(y) * 5.0 * u2 * u2;
  };
  return integrate(g, std::pow(lo, 0.2), std::pow(hi, 0.2), tol, depth);
}

// Modified Bessel I0, I1 via the integral representations
// I_n(x) = (1/pi) int_0^pi e^{x cos t} cos(n t) dt, integrated in scaled form
// e^{x(cos t - 1)} so the absolute tolerance stays meaningful at large x.
inline double bessel_i0(double x) {
  double scaled =
      integrate([x](double t) { return std::exp(x * (std::cos(t) - 1.0)); }, 0.0, kPi, 1e-14) /
      kPi;
  return scaled * std::exp(x);
}
inline double bessel_i1(double x) {
  double scaled = integrate(
      [x](double t) { return std::exp(x * (std::cos(t) - 1.0)) * std::cos(t); }, 0.0, kPi,
      1e-14) / kPi;
  return scaled * std::exp(x);
}

// Exact rational arithmetic (small terminating hypergeometric sums).
struct Fraction {
  long long num = 0;
  long long den = 1;

  void reduce() {
    long long g = std::gcd(std::abs(num), std::abs(den));
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
  }
  Fraction operator+(const Fraction& o) const {
    Fraction r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  Fraction operator*(const Fraction& o) const {
    Fraction r{num * o.num, den * o.den};
    r.reduce();
    return r;
  }
  Fraction operator/(const Fraction& o) const {
    Fraction r{num * o.den, den * o.num};
    r.reduce();
    return r;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Terminating 2F1(-n, b; c; x) with rational b, c, x, summed exactly.
inline Fraction hyp2f1_exact(int n, Fraction b, Fraction c, Fraction x) {
  Fraction sum{1, 1};
  Fraction term{1, 1};
  for (int k = 0; k < n; ++k) {
    Fraction ak{-n + k, 1};
    Fraction bk = b + Fraction{k, 1};
    Fraction ck = c + Fraction{k, 1};
    Fraction kk{k + 1, 1};
    term = term * ak * bk / (ck * kk) * x;
    sum = sum + term;
  }
  return sum;
}

// Kolmogorov-Smirnov distance between a sorted sample and a reference CDF.
inline double ks_distance(const std::vector<double>& sorted_sample,
                          const std::function<double(double)>& cdf) {
  double ks = 0.0;
  const double n = static_cast<double>(sorted_sample.size());
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    double F = cdf(sorted_sample[i]);
    ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return ks;
}

// Deterministic test-local RNG (mt19937_64 is fully specified by the
// standard; the transforms below avoid implementation-defined distributions).
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : eng_(seed) {}
  double u01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = u01(), u2 = u01();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    have_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }
  double exponential() { return -std::log(u01()); }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_ = false;
};

}  // namespace oracle
