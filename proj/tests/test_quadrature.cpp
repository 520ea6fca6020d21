#include "exitlab/quadrature.hpp"

#include <cmath>
#include <doctest.h>

#include "oracles.hpp"

using namespace exitlab;

TEST_CASE("gauss-kronrod: exact polynomials and smooth integrands") {
  auto r = quadrature::integrate([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 3.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(16.0).epsilon(1e-14));

  r = quadrature::integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(r.value == doctest::Approx(std::sqrt(oracle::kPi)).epsilon(1e-13));
}

TEST_CASE("gauss-kronrod: endpoint singularity x^-1/2") {
  auto r = quadrature::integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-300, 1.0,
                                 {1e-10, 1e-10, 10000});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("semi-infinite map") {
  auto r = quadrature::integrate_to_inf([](double x) { return std::exp(-x); }, 0.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  r = quadrature::integrate_to_inf([](double x) { return std::exp(-0.5 * x) * x; }, 2.0);
  // int_2^inf x e^{-x/2} dx = 8 e^{-1}
  CHECK(r.value == doctest::Approx(8.0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("real-line map and split points") {
  auto r = quadrature::integrate_real_line(
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * oracle::kPi); }, 1.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));

  // Kinked integrand: |x - 0.3| on [0,1], split at the kink.
  auto s = quadrature::integrate_split([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0,
                                       {0.3});
  double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
  CHECK(s.value == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("error estimate brackets the true error") {
  auto r = quadrature::integrate([](double x) { return std::sin(10.0 * x); }, 0.0, 3.0);
  double exact = (1.0 - std::cos(30.0)) / 10.0;
  CHECK(std::abs(r.value - exact) <= std::max(r.error, 1e-13));
}
