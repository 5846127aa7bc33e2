#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rank1/charfn.hpp"
#include "rank1/error.hpp"
#include "rank1/gallery.hpp"

using namespace rank1;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const SpectralError& e) {
    return e.kind();
  }
  FAIL("no SpectralError raised");
  return ErrorKind::InvalidArgument;
}

CharacteristicFunction make(const PerturbationCoefficients& p, Index truncation = 2000) {
  const BaseSpectrum spec = fixtures::integers();
  return CharacteristicFunction(spec, validate_coefficients(p, spec), truncation);
}

CharacteristicFunction example_51(Index truncation) {
  const BaseSpectrum spec = gallery::example_periodic_base();
  return CharacteristicFunction(spec, validate_coefficients(gallery::example_51(), spec, {.allow_nonsummable = true}),
                                truncation);
}

}  // namespace

TEST_CASE("zero coefficients give F = 1 exactly") {
  const CharacteristicFunction cf = make(fixtures::residue_head(0, {0.0}));
  for (cplx z : {cplx(0.5, 0.0), cplx(-3.0, 2.0), cplx(100.0, -1e-3)}) {
    const Evaluation e = cf.eval(z);
    CHECK(e.value == cplx(1.0));
    CHECK(e.error_bound == 0.0);
    CHECK(cf.derivative(z, 1).value == cplx(0.0));
    CHECK(cf.derivative(z, 3).value == cplx(0.0));
  }
  const auto [k, kp] = cf.compute_keps(0.2);
  CHECK(k == 0);
  CHECK(kp == 1);
}

TEST_CASE("two-point function vanishes at its hand-computed zeros") {
  const CharacteristicFunction cf = make(fixtures::two_point());
  CHECK(std::abs(cf.eval(0.25).value) < 1e-15);
  CHECK(std::abs(cf.eval(1.1).value) < 1e-15);
  CHECK(cf.derivative(0.25, 1).value.real() == doctest::Approx(0.275 / 0.0625 + 0.075 / 0.5625));
  CHECK(std::abs(cf.eval_H(1, 1.1)) < 1e-15);
  CHECK(cf.eval_H(0, 1.1).real() == doctest::Approx(0.75));
  const CharacteristicFunction far = make(fixtures::residue_head(3, {0.1}));
  CHECK(far.eval_H(2, 1.1) == cplx(1.0));
}

TEST_CASE("single pole derivative") {
  const CharacteristicFunction cf = make(fixtures::residue_head(0, {1.0}));
  CHECK(cf.derivative(2.0, 1).value.real() == doctest::Approx(0.25));
  CHECK(cf.derivative(2.0, 2).value.real() == doctest::Approx(-0.25));
}

TEST_CASE("single-term function G_k") {
  const CharacteristicFunction cf = make(fixtures::residue_head(2, {0.0, 0.1}));
  CHECK(cf.eval_G(3, 3.05).real() == doctest::Approx(-1.0));
  CHECK(kind_of([&] { cf.eval_G(2, 1.0); }) == ErrorKind::IndexNotInI1);
}

TEST_CASE("evaluating at a pole raises PoleHit") {
  const CharacteristicFunction cf = make(fixtures::two_point());
  CHECK(kind_of([&] { cf.eval(1.0); }) == ErrorKind::PoleHit);
}

TEST_CASE("cotangent closed form at z = 1/2") {
  CHECK(gallery::example_51_closed_form(0.5).real() == doctest::Approx(5.0));
  // Tail-completed sums are accurate at every truncation; the bare partial
  // sums H_N approach the same value as N grows.
  for (Index n : {50, 400, 2000}) {
    const Evaluation e = example_51(n).eval(0.5);
    CHECK(std::abs(e.value - 5.0) < 1e-9);
    CHECK(std::abs(e.value - 5.0) <= e.error_bound + 1e-12);
  }
  const CharacteristicFunction cf = example_51(2000);
  double previous = INFINITY;
  for (Index n : {10, 100, 1000}) {
    const double err = std::abs(cf.eval_H(n, 0.5) - 5.0);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("closed form agrees off the real axis") {
  const CharacteristicFunction cf = example_51(2000);
  for (cplx z : {cplx(0.3, 0.7), cplx(-12.4, 0.5), cplx(150.5, -2.0), cplx(3.0, 40.0)}) {
    const Evaluation e = cf.eval(z);
    CHECK(std::abs(e.value - gallery::example_51_closed_form(z)) < 1e-9);
  }
}

TEST_CASE("derivatives agree with finite differences") {
  const CharacteristicFunction cf = make(gallery::example_52(2.0));
  const cplx z(2.3, 0.4);
  const double h = 1e-5;
  const cplx fd = (cf.eval(z + h).value - cf.eval(z - h).value) / (2.0 * h);
  CHECK(std::abs(cf.derivative(z, 1).value - fd) < 1e-7);
  const auto [f, df] = cf.eval_with_derivative(z);
  CHECK(std::abs(f.value - cf.eval(z).value) < 1e-14);
  CHECK(std::abs(df.value - cf.derivative(z, 1).value) < 1e-13);
  const cplx fd2 = (cf.derivative(z + h, 1).value - cf.derivative(z - h, 1).value) / (2.0 * h);
  CHECK(std::abs(cf.derivative(z, 2).value - fd2) < 1e-6);
}

TEST_CASE("K_eps for c_n = |n|^-4 matches brute-force tail sums") {
  const CharacteristicFunction cf = make(gallery::example_52(2.0));
  const double eps = 0.1;
  const auto tail = [](Index big_n) {
    double s = 0.0;
    for (Index n = 1000000; n > big_n; --n) s += 2.0 * std::pow(static_cast<double>(n), -4.0);
    return s;
  };
  Index expected = 0;
  while (tail(expected) >= eps) ++expected;
  const auto [k, kp] = cf.compute_keps(eps);
  CHECK(k == expected);
  double head = 0.0;
  for (Index n = 1; n <= k; ++n) head += 2.0 * std::pow(static_cast<double>(n), -4.0);
  CHECK(head / (static_cast<double>(kp - k) * cf.gap()) < eps);
  CHECK(head / (static_cast<double>(kp - 1 - k) * cf.gap()) >= eps);
}

TEST_CASE("eps outside (0, d/2) is rejected") {
  const CharacteristicFunction cf = make(fixtures::two_point());
  CHECK(kind_of([&] { cf.compute_keps(1.0); }) == ErrorKind::EpsOutOfRange);
  CHECK(kind_of([&] { cf.compute_keps(0.0); }) == ErrorKind::EpsOutOfRange);
}

TEST_CASE("pole bookkeeping") {
  const CharacteristicFunction cf = make(fixtures::two_point());
  CHECK(cf.poles().size() == 2);
  CHECK(cf.count_poles_between(-0.5, 0.5) == 1);
  CHECK(cf.count_poles_between(-0.5, 1.5) == 2);
  CHECK(cf.distance_to_nearest_pole(cplx(0.5, 0.0)) == doctest::Approx(0.5));
}
