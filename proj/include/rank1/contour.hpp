#pragma once

// Argument-principle zero counting for the characteristic function.

#include <variant>

#include "rank1/charfn.hpp"

namespace rank1 {

struct DiskRegion {
  cplx center;
  double radius = 0.0;
};

struct RectRegion {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  cplx center() const noexcept { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  double diameter() const noexcept;
  bool contains(cplx z) const noexcept {
    return z.real() > x0 && z.real() < x1 && z.imag() > y0 && z.imag() < y1;
  }
  bool contains(const DiskRegion& d) const noexcept {
    return d.center.real() - d.radius > x0 && d.center.real() + d.radius < x1 &&
           d.center.imag() - d.radius > y0 && d.center.imag() + d.radius < y1;
  }
};

using Region = std::variant<DiskRegion, RectRegion>;

struct WindingResult {
  int count = 0;             // zeros minus poles inside, rounded from the contour integral
  bool certified = false;
  cplx integral;             // (1 / 2 pi i) * contour integral of F'/F
  double quadrature_error = 0.0;
  int argument_count = 0;    // the same winding from accumulated arg F increments
  double max_argument_step = 0.0;
  double min_abs_f = 0.0;
  double max_eval_error = 0.0;
  int evaluations = 0;
  int quadrature_points = 0;
  bool budget_exhausted = false;  // adaptive refinement stopped early; more points will not help
  Index poles_inside = 0;

  int zeros() const noexcept { return count + static_cast<int>(poles_inside); }
};

// Trapezoidal rule on circles, adaptive composite Gauss-Kronrod on rectangle
// sides. Throws ContourThroughSingularity if a pole lies within 1e-8 of the
// contour. A count is certified when the rounding gap exceeds the quadrature
// error, min |F| on the contour exceeds twice the evaluation error bound, and
// the argument-increment count agrees with the integral.
WindingResult winding_number(const CharacteristicFunction& cf, const Region& region, int quadrature_points);

// Doubles the quadrature points until certified or max_points is reached.
WindingResult winding_with_escalation(const CharacteristicFunction& cf, const Region& region,
                                      int initial_points, int max_points);

Index poles_inside(const CharacteristicFunction& cf, const Region& region);

struct RefinedZero {
  cplx location;
  int order = 1;
  double residual = 0.0;  // |F(location)|
};

struct RefineOptions {
  double tol = 1e-10;           // bound on |F(location)|
  double cluster_tol = 1e-6;    // relative to the gap d
  double max_step = 0.0;        // Newton step cap; 0 means d
  bool confirm_order = true;
  int quadrature_points = 256;
  int max_quadrature_points = 4096;
};

// Newton on F^(order_hint - 1). Throws NoConvergence or OrderMismatch.
RefinedZero refine_zero(const CharacteristicFunction& cf, cplx seed, int order_hint, const RefineOptions& options);

// Radius within which an order-m zero at z is indistinguishable from an
// m-cluster: max(cluster_tol * d, 10 * (m! |err F| / |F^(m)|)^(1/m)).
double cluster_radius(const CharacteristicFunction& cf, cplx z, int order, double cluster_tol);

}  // namespace rank1
