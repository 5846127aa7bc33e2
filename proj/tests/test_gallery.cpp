#include <doctest.h>

#include <cmath>

#include "rank1/error.hpp"
#include "rank1/gallery.hpp"

using namespace rank1;

TEST_CASE("periodic base: lambda_n = n with gap 1") {
  const BaseSpectrum s = gallery::example_periodic_base();
  CHECK(s.gap == 1.0);
  CHECK(s.lambda(0) == 0.0);
  for (Index n = -30; n < 30; ++n) CHECK(s.lambda(n + 1) - s.lambda(n) == 1.0);
}

TEST_CASE("cotangent example coefficients") {
  const PerturbationCoefficients p = gallery::example_51();
  CHECK(p.c(5).real() == doctest::Approx(0.2));
  CHECK(p.c(-5).real() == doctest::Approx(-0.2));
  CHECK(p.c(0) == cplx(0.0));
  CHECK(p.a(5).real() == doctest::Approx(std::pow(5.0, -0.5)));
  CHECK(p.b(-5).real() == doctest::Approx(-std::pow(5.0, -0.5)));
}

TEST_CASE("cotangent example closed form") {
  CHECK(gallery::example_51_closed_form(0.5).real() == doctest::Approx(5.0));
  // Partial sums of 1 + sum 1/(n(n - z)) converge to it.
  const cplx z(0.3, 0.4);
  cplx partial = 1.0;
  for (int n = 1; n <= 200000; ++n) {
    partial += 1.0 / (static_cast<double>(n) * (static_cast<double>(n) - z));
    partial += 1.0 / (-static_cast<double>(n) * (-static_cast<double>(n) - z));
  }
  CHECK(std::abs(partial - gallery::example_51_closed_form(z)) < 1e-5);
}

TEST_CASE("power-decay example coefficients") {
  const PerturbationCoefficients p = gallery::example_52(2.0);
  CHECK(p.c(3).real() == doctest::Approx(1.0 / 81.0));
  CHECK(p.c(-3).real() == doctest::Approx(1.0 / 81.0));
  CHECK(p.c(0) == cplx(0.0));
  CHECK(gallery::example_52_residue_exponent(2.0) == 4.0);
  for (double beta : {1.01, 1.5, 3.0})
    CHECK_NOTHROW(validate_coefficients(gallery::example_52(beta), gallery::example_periodic_base()));
  CHECK_THROWS_AS(gallery::example_52(1.0), SpectralError);
  try {
    gallery::example_52(0.7);
  } catch (const SpectralError& e) {
    CHECK(e.kind() == ErrorKind::BetaOutOfRange);
  }
}

TEST_CASE("least-squares line") {
  const auto [slope, intercept] = gallery::linear_fit({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(slope == doctest::Approx(2.0));
  CHECK(intercept == doctest::Approx(1.0));
}

TEST_CASE("periodic report passes") {
  for (const gallery::Check& c : gallery::report_periodic()) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("power-decay example report passes on a moderate window") {
  const std::vector<gallery::Check> checks = gallery::report_52(2.0, 60);
  CHECK(checks.size() >= 5);
  for (const gallery::Check& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("cotangent example report passes") {
  const std::vector<gallery::Check> checks = gallery::report_51(120);
  CHECK(checks.size() == 4);
  for (const gallery::Check& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
}
