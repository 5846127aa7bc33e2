#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rank1/direct.hpp"
#include "rank1/error.hpp"
#include "rank1/inverse.hpp"

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

TargetSpectrum target(Index offset, std::vector<cplx> values) {
  TargetSpectrum t;
  t.head_offset = offset;
  t.head = std::move(values);
  return t;
}

}  // namespace

TEST_CASE("split of an unperturbed target is empty") {
  const TargetSplit s = split_target(fixtures::integers(), target(-2, {-2.0, -1.0, 0.0, 1.0}));
  CHECK(s.i1.empty());
  CHECK(s.i0.size() == 4);
}

TEST_CASE("split of the two-point target") {
  const TargetSplit s = split_target(fixtures::integers(), target(-1, {-1.0, 0.25, 1.1, 2.0}));
  CHECK(s.i1 == std::vector<Index>{0, 1});
}

TEST_CASE("repeated eigenvalue values are moved to their own index") {
  // 3 appears at positions 2 and 5; position 3 then keeps the value 2.
  const TargetSplit s = split_target(fixtures::integers(), target(0, {0.0, 1.0, 3.0, 2.0, 4.0, 3.0}));
  CHECK(s.normalized.nu(3, fixtures::integers()) == cplx(3.0));
  CHECK(s.normalized.nu(2, fixtures::integers()) == cplx(2.0));
  CHECK(s.i1 == std::vector<Index>{5});
}

TEST_CASE("product function values") {
  const ProductFunction empty(fixtures::integers(), target(0, {0.0}));
  CHECK(empty.eval(cplx(0.3, 2.0)) == cplx(1.0));
  const ProductFunction pf(fixtures::integers(), target(0, {0.25, 1.1}));
  CHECK(pf.eval(2.0).real() == doctest::Approx(0.7875));
  CHECK(pf.total_deviation() == doctest::Approx(0.35));
  const double h = 1e-6;
  const cplx z(0.6, 0.3);
  CHECK(std::abs(pf.derivative(z) - (pf.eval(z + h) - pf.eval(z - h)) / (2.0 * h)) < 1e-8);
}

TEST_CASE("residues of the two-point and double-point targets") {
  const ResidueMap c = residues(ProductFunction(fixtures::integers(), target(0, {0.25, 1.1})));
  CHECK(c.at(0).real() == doctest::Approx(0.275));
  CHECK(c.at(1).real() == doctest::Approx(0.075));
  const ResidueMap dbl = residues(ProductFunction(fixtures::integers(), target(0, {0.5, 0.5})));
  CHECK(dbl.at(0).real() == doctest::Approx(0.25));
  CHECK(dbl.at(1).real() == doctest::Approx(-0.25));
  CHECK(residues(ProductFunction(fixtures::integers(), target(0, {0.0, 1.0}))).empty());
}

TEST_CASE("synthesized coefficients") {
  const BaseSpectrum spec = fixtures::integers();
  const PerturbationCoefficients p = synthesize_coefficients(spec, {{0, 0.275}, {1, -1.0}});
  CHECK(p.a(0).real() == doctest::Approx(0.524404424085));
  CHECK(p.b(0).real() == doctest::Approx(0.524404424085));
  CHECK(p.a(1) == cplx(1.0));
  CHECK(p.b(1).real() == doctest::Approx(-1.0));
  CHECK(std::abs(p.c(1) + 1.0) < 1e-15);
  // off I1: a_n = 1/(1+|n|), b_n = 0
  CHECK(p.a(-3).real() == doctest::Approx(0.25));
  CHECK(p.b(-3) == cplx(0.0));
  CHECK(p.c(7) == cplx(0.0));
}

TEST_CASE("unperturbed target gives b = 0") {
  const PerturbationCoefficients p = solve_inverse(fixtures::integers(), target(0, {0.0, 1.0, 2.0}));
  for (Index n = -5; n <= 5; ++n) CHECK(p.b(n) == cplx(0.0));
}

TEST_CASE("complex target nu_0 = i gives c_0 = i") {
  const InverseResult r = solve_inverse_certified(fixtures::integers(), target(0, {cplx(0.0, 1.0)}));
  CHECK(std::abs(r.residues.at(0) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(r.coefficients.c(0) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(r.check.within_bounds);
}

TEST_CASE("F equals the product at sample points") {
  const BaseSpectrum spec = fixtures::integers();
  const ProductFunction pf(spec, target(0, {0.25, 1.1}));
  const PerturbationCoefficients p = solve_inverse(spec, target(0, {0.25, 1.1}));
  const DiscrepancyReport r = check_F_equals_product(p, pf, {2.0, cplx(-1.0, 1.0), cplx(0.0, 1e3)});
  CHECK(r.max_discrepancy <= 1e-12);
  CHECK(r.within_bounds);
  CHECK(default_sample_points(pf).size() == 25);
}

TEST_CASE("double point: both sides vanish to second order") {
  const BaseSpectrum spec = fixtures::integers();
  const TargetSpectrum t = target(0, {0.5, 0.5});
  const ProductFunction pf(spec, t);
  const PerturbationCoefficients p = solve_inverse(spec, t);
  const CharacteristicFunction cf(spec, validate_coefficients(p, spec));
  CHECK(std::abs(cf.eval(0.5).value) < 1e-14);
  CHECK(std::abs(pf.eval(0.5)) < 1e-14);
  CHECK(std::abs(cf.derivative(0.5, 1).value - pf.derivative(0.5)) <= 1e-10);
  CHECK(check_F_equals_product(p, pf, default_sample_points(pf)).within_bounds);
}

TEST_CASE("fixed phi determines b, and a vanishing a_n obstructs") {
  const BaseSpectrum spec = fixtures::integers();
  CoefficientSequence phi;
  phi.head_offset = 0;
  phi.head = {cplx(0.0, 2.0), 0.5};
  const InverseResult r = solve_inverse_certified(spec, target(0, {0.25, 1.1}), phi);
  CHECK(r.coefficients.a(0) == cplx(0.0, 2.0));
  CHECK(std::abs(r.coefficients.c(0) - 0.275) < 1e-15);
  CHECK(std::abs(r.coefficients.c(1) - 0.075) < 1e-15);
  CHECK(r.check.within_bounds);

  phi.head = {0.0, 0.5};
  CHECK(kind_of([&] { solve_inverse_certified(spec, target(0, {0.25, 1.1}), phi); }) ==
        ErrorKind::ZeroCoefficientObstruction);
  // a_0 = 0 is harmless when c_0 = 0
  CHECK_NOTHROW(solve_inverse_certified(spec, target(0, {0.0, 1.1}), phi));
}

TEST_CASE("round trip through the direct solver") {
  const BaseSpectrum spec = fixtures::integers();
  const TargetSpectrum t = target(-2, {cplx(-2.1, 0.2), -1.0, 0.25, 1.1, cplx(2.0, -0.3)});
  const DirectResult r = solve_direct(spec, solve_inverse(spec, t));
  for (Index n = -2; n <= 2; ++n) {
    const SpectrumEntry* e = r.spectrum.find(n);
    REQUIRE(e != nullptr);
    CHECK(std::abs(e->mu - t.nu(n, spec)) < 1e-10);
  }
}

TEST_CASE("invalid targets are rejected") {
  const BaseSpectrum spec = fixtures::integers();
  CHECK(kind_of([&] { solve_inverse(spec, target(0, {NAN})); }) == ErrorKind::NonReal);
}
