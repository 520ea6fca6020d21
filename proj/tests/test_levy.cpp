#include "exitlab/levy.hpp"

#include <cmath>
#include <doctest.h>
#include <random>
#include <vector>

#include "exitlab/errors.hpp"
#include "exitlab/laplace.hpp"
#include "oracles.hpp"

using namespace exitlab;
using levy::Law;
using levy::SubordinatorSpec;

namespace {

std::vector<SubordinatorSpec> all_specs() {
  return {
      SubordinatorSpec::gamma_stationary(1.0, 1.0), SubordinatorSpec::gamma_bdlp(1.0, 1.0),
      SubordinatorSpec::ig_stationary(1.0, 1.0),    SubordinatorSpec::ig_bdlp(1.0, 1.0),
      SubordinatorSpec::pts_stationary(1.0, 0.5, 1.0), SubordinatorSpec::pts_bdlp(1.0, 0.5, 1.0),
  };
}

}  // namespace

TEST_CASE("levy_density: direct values and decay") {
  CHECK(levy::levy_density(SubordinatorSpec::gamma_bdlp(1.0, 1.0), 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(levy::levy_density(SubordinatorSpec::gamma_stationary(2.0, 3.0), 1.0) ==
        doctest::Approx(2.0 * std::exp(-3.0)).epsilon(1e-15));
  for (const auto& spec : all_specs()) {
    CHECK(levy::levy_density(spec, 400.0) < 1e-60);
    CHECK(levy::levy_density(spec, 0.5) >= 0.0);
    CHECK_THROWS_AS(levy::levy_density(spec, 0.0), std::domain_error);
  }
}

TEST_CASE("stationary-to-BDLP map reproduces the catalog densities") {
  struct CasePair {
    SubordinatorSpec stat, bdlp;
  };
  std::vector<CasePair> pairs{
      {SubordinatorSpec::gamma_stationary(1.3, 0.8), SubordinatorSpec::gamma_bdlp(1.3, 0.8)},
      {SubordinatorSpec::ig_stationary(0.9, 1.2), SubordinatorSpec::ig_bdlp(0.9, 1.2)},
      {SubordinatorSpec::pts_stationary(1.1, 0.4, 1.5), SubordinatorSpec::pts_bdlp(1.1, 0.4, 1.5)},
  };
  for (const auto& pr : pairs) {
    auto u = [&](double x) { return levy::levy_density(pr.stat, x); };
    auto up = [&](double x) { return levy::stationary_levy_density_prime(pr.stat, x); };
    auto w = levy::bdlp_from_stationary(u, up);
    // 100-point log grid over [1e-3, 1e2].
    for (int i = 0; i < 100; ++i) {
      double x = std::pow(10.0, -3.0 + 5.0 * i / 99.0);
      double expected = levy::levy_density(pr.bdlp, x);
      CHECK(w(x) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("integrated tail: closed forms against quadrature of the density") {
  CHECK(levy::integrated_tail(SubordinatorSpec::gamma_bdlp(1.0, 1.0), 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(levy::integrated_tail(SubordinatorSpec::gamma_bdlp(2.0, 3.0), 1.0) ==
        doctest::Approx(2.0 * std::exp(-3.0)).epsilon(1e-13));
  for (const auto& spec : all_specs()) {
    CAPTURE(spec.to_string());
    for (double t : {0.3, 1.0, 2.5}) {
      double closed = levy::integrated_tail(spec, t);
      double quad = oracle::integrate_to_inf([&](double x) { return levy::levy_density(spec, x); },
                                             t, 1e-13);
      CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(levy::integrated_tail(SubordinatorSpec::gamma_bdlp(1.0, 1.0), 0.0),
                  std::domain_error);
}

TEST_CASE("laplace exponent: values, zero at origin, monotonicity") {
  CHECK(levy::laplace_exponent(SubordinatorSpec::gamma_stationary(1.0, 1.0))(1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(levy::laplace_exponent(SubordinatorSpec::gamma_bdlp(1.0, 1.0))(1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  for (const auto& spec : all_specs()) {
    auto psi = levy::laplace_exponent(spec);
    CHECK(std::abs(psi(0.0)) < 1e-14);
  }
  // psi strictly increasing on s > 0, random parameters.
  std::mt19937_64 eng(42);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
  };
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<SubordinatorSpec> specs{
        SubordinatorSpec::gamma_stationary(uni(0.2, 3.0), uni(0.2, 3.0)),
        SubordinatorSpec::gamma_bdlp(uni(0.2, 3.0), uni(0.2, 3.0)),
        SubordinatorSpec::ig_stationary(uni(0.2, 3.0), uni(0.2, 3.0)),
        SubordinatorSpec::ig_bdlp(uni(0.2, 3.0), uni(0.2, 3.0)),
        SubordinatorSpec::pts_stationary(uni(0.2, 3.0), uni(0.05, 0.95), uni(0.2, 3.0)),
        SubordinatorSpec::pts_bdlp(uni(0.2, 3.0), uni(0.05, 0.95), uni(0.2, 3.0)),
    };
    for (const auto& spec : specs) {
      auto psi = levy::laplace_exponent(spec);
      double prev = 0.0;
      for (double s = 0.25; s < 20.0; s *= 1.7) {
        double cur = psi(s);
        CHECK(cur > prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("theorem-level tail/exponent consistency: s L(pi(t,inf))(s) = psi(s)") {
  for (const auto& spec : all_specs()) {
    CAPTURE(spec.to_string());
    auto psi = levy::laplace_exponent(spec);
    // pi(t,inf) decays like e^{-tilt t} times a power; halve the rate for safety.
    laplace::TailBound tail{10.0 * levy::integrated_tail(spec, 0.01), 0.5 * spec.tilt(), 0.01};
    for (double s : {0.5, 1.0, 2.0, 5.0}) {
      auto fwd = laplace::forward([&](double t) {
        return t > 0.0 ? levy::integrated_tail(spec, t) : 0.0;
      }, laplace::Complex(s), &tail);
      CHECK(s * fwd.value.real() == doctest::Approx(psi(s)).epsilon(1e-8));
    }
  }
}

TEST_CASE("cumulant: identity with the exponent and divergence guard") {
  auto spec = SubordinatorSpec::gamma_bdlp(1.0, 1.0);
  CHECK(levy::cumulant_kappa(spec, 0.0) == 0.0);
  CHECK(levy::cumulant_kappa(spec, -1.0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_THROWS_AS(levy::cumulant_kappa(spec, 1.0), DivergentCumulant);
  CHECK_THROWS_AS(levy::cumulant_kappa(spec, 1.5), DivergentCumulant);
  // kappa(theta) = integral identity, cross-checked by quadrature.
  double theta = -0.6;
  double quad = oracle::integrate_to_inf(
      [&](double x) { return (std::exp(theta * x) - 1.0) * levy::levy_density(spec, x); }, 1e-12,
      1e-13);
  CHECK(levy::cumulant_kappa(spec, theta) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("risk-neutral drift assembly") {
  auto spec = SubordinatorSpec::gamma_bdlp(1.0, 1.0);
  levy::ModelParams m = levy::risk_neutral_params(spec, -0.5, 2.0, 0.01);
  double kappa = levy::cumulant_kappa(spec, -0.5);
  CHECK(m.sigma == doctest::Approx(1.0).epsilon(1e-14));  // stationary mean nu/alpha
  CHECK(m.mu == doctest::Approx(0.01 - 2.0 * kappa - 0.5).epsilon(1e-14));
  CHECK(m.lambda == 2.0);
  CHECK(m.rho == -0.5);
}

TEST_CASE("samplers: empirical transform matches e^{-psi(s)} (4 SE)") {
  const int n = 200000;
  for (const auto& spec : all_specs()) {
    CAPTURE(spec.to_string());
    auto psi = levy::laplace_exponent(spec);
    rng::Stream stream(20240811, 1);
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = levy::sample_increment(spec, 1.0, stream);
    for (double s : {0.5, 1.0, 2.0}) {
      double mean = 0.0, m2 = 0.0;
      for (double z : draws) {
        double v = std::exp(-s * z);
        mean += v;
        m2 += v * v;
      }
      mean /= n;
      m2 /= n;
      double se = std::sqrt((m2 - mean * mean) / n);
      double expected = std::exp(-psi(s));
      CHECK(std::abs(mean - expected) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("samplers: moment bands") {
  // Compound Poisson-exponential: E = nu/alpha = 1, Var = 2 nu/alpha^2 = 2.
  {
    auto spec = SubordinatorSpec::gamma_bdlp(1.0, 1.0);
    rng::Stream stream(7, 2);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += levy::sample_increment(spec, 1.0, stream);
    CHECK(std::abs(sum / n - 1.0) <= 3.0 * std::sqrt(2.0 / n));
  }
  // IG stationary: mean delta/gamma = 1, Var = delta/gamma^3 = 1.
  {
    auto spec = SubordinatorSpec::ig_stationary(1.0, 1.0);
    rng::Stream stream(7, 3);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += levy::sample_increment(spec, 1.0, stream);
    CHECK(std::abs(sum / n - 1.0) <= 3.0 * std::sqrt(1.0 / n));
  }
}

TEST_CASE("samplers: small-dt mean scales linearly") {
  for (const auto& spec : all_specs()) {
    CAPTURE(spec.to_string());
    auto psi = levy::laplace_exponent(spec);
    const double dt = 0.01;
    const int n = 200000;
    rng::Stream stream(99, 4);
    double sum = 0.0;
    int zeros_or_small = 0;
    for (int i = 0; i < n; ++i) {
      double inc = levy::sample_increment(spec, dt, stream);
      sum += inc;
      if (inc < 0.05) ++zeros_or_small;
    }
    double mean = sum / n;
    double expected = psi.mean() * dt;
    // 4 SE with a generous variance bound (heavy-tailed increments).
    CHECK(std::abs(mean - expected) <= std::max(0.2 * expected, 4.0 * std::sqrt(psi.variance() * dt / n)));
    CHECK(zeros_or_small > n * 0.9);  // increments collapse toward 0 in probability
  }
}

TEST_CASE("exact mean/variance accessors match numerical differentiation") {
  for (const auto& spec : all_specs()) {
    CAPTURE(spec.to_string());
    auto psi = levy::laplace_exponent(spec);
    const double h = 1e-5;
    double d1 = (psi(2.0 * h) - psi(0.0)) / (2.0 * h) * 2.0 - (psi(4.0 * h) - psi(0.0)) / (4.0 * h);
    // Richardson first derivative at 0+.
    CHECK(psi.mean() == doctest::Approx(d1).epsilon(1e-4));
    double d2 = (psi(2.0 * h) - 2.0 * psi(h) + psi(0.0)) / (h * h);
    CHECK(-psi.variance() == doctest::Approx(d2).epsilon(1e-3));
  }
}

TEST_CASE("marginal laws: normalization and survival consistency") {
  // Inversion-backed densities carry ~1e-12 noise, so the quadrature oracle
  // runs on a finite window (mass beyond y = 60 is below e^-25 here) with a
  // matching tolerance and bounded recursion.
  const double t = 0.8;
  for (const auto& spec : all_specs()) {
    CAPTURE(spec.to_string());
    levy::Marginal m = levy::marginal(spec, t);
    double mass = m.atom_mass + oracle::integrate_power_stretched(m.density, 1e-12, 60.0, 1e-9, 18);
    CHECK(mass == doctest::Approx(1.0).epsilon(2e-5));
    for (double y : {0.4, 1.0, 2.3}) {
      double tail = oracle::integrate(m.density, y, 60.0, 1e-8, 16);
      CHECK(m.survival(y) == doctest::Approx(tail).epsilon(5e-5));
    }
    CHECK(m.survival(0.0) == 1.0);
  }
}

TEST_CASE("gamma-bdlp marginal: explicit atom") {
  auto spec = SubordinatorSpec::gamma_bdlp(1.0, 1.0);
  levy::Marginal m = levy::marginal(spec, 2.0);
  CHECK(m.atom_mass == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  // survival just above zero approaches 1 - atom.
  CHECK(m.survival(1e-9) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-6));
}

TEST_CASE("spec strings: round trip and error reporting") {
  auto spec = levy::parse_spec("gamma-bdlp:nu=1.5,alpha=2");
  CHECK(spec.law == Law::GammaBDLP);
  CHECK(spec.nu == 1.5);
  CHECK(spec.alpha == 2.0);
  auto pts = levy::parse_spec("pts-bdlp:beta=1,gamma=0.5,k=1");
  CHECK(pts.law == Law::PTSBDLP);
  CHECK(pts.index == 0.5);

  CHECK_THROWS_WITH_AS(levy::parse_spec("gamma-bdlp:nu=1,omega=2"),
                       doctest::Contains("omega"), ParseError);
  CHECK_THROWS_WITH_AS(levy::parse_spec("gamma-bdlp:nu=abc,alpha=1"),
                       doctest::Contains("nu"), ParseError);
  CHECK_THROWS_AS(levy::parse_spec("weird-law:nu=1"), ParseError);
  CHECK_THROWS_AS(levy::parse_spec("gamma-bdlp:nu=-1,alpha=1"), ParseError);
}

TEST_CASE("spec validation ranges") {
  CHECK_THROWS_AS(SubordinatorSpec::gamma_bdlp(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(SubordinatorSpec::pts_bdlp(1.0, 1.2, 1.0), std::domain_error);
  // k = 0 is storable but not usable for exponent/sampling.
  auto k0 = SubordinatorSpec::pts_stationary(1.0, 0.5, 0.0);
  CHECK_THROWS_AS(levy::laplace_exponent(k0), std::domain_error);
  rng::Stream s(1, 1);
  CHECK_THROWS_AS(levy::sample_increment(k0, 1.0, s), std::domain_error);
}
