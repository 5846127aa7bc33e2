#include "rank1/contour.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rank1/error.hpp"

namespace rank1 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularDistance = 1e-8;
constexpr double kMaxArgumentStep = std::numbers::pi / 2.0;
constexpr double kEdgeTolerance = 1e-9;
constexpr int kMaxPanelDepth = 40;
// Rectangle contours stop refining after this many F evaluations per
// requested quadrature point and are reported uncertified.
constexpr int kEvaluationsPerPoint = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
  double s;  // position along the contour, used to order samples
  cplx f;
};

struct Accumulator {
  cplx integral{0.0, 0.0};  // contour integral of F'/F dz (not yet divided by 2 pi i)
  double error = 0.0;
  double min_abs_f = kInf;
  double max_eval_error = 0.0;
  bool finite = true;
  bool exhausted = false;
  int evaluations = 0;
  int budget = std::numeric_limits<int>::max();
  std::vector<Sample> samples;

  cplx log_derivative(const CharacteristicFunction& cf, cplx z, double s) {
    const auto [f, df] = cf.eval_with_derivative(z);
    ++evaluations;
    const double af = std::abs(f.value);
    min_abs_f = std::min(min_abs_f, af);
    max_eval_error = std::max(max_eval_error, f.error_bound);
    samples.push_back({s, f.value});
    const cplx g = df.value / f.value;
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) finite = false;
    return g;
  }
};

[[noreturn]] void singular(const std::string& where, double lambda) {
  fail(ErrorKind::ContourThroughSingularity,
       where + " passes within 1e-8 of the pole at " + std::to_string(lambda));
}

void check_disk(const CharacteristicFunction& cf, const DiskRegion& disk) {
  const double cx = disk.center.real();
  for (const Pole& p : cf.poles_between(cx - disk.radius - 1.0, cx + disk.radius + 1.0)) {
    if (std::abs(std::abs(p.lambda - disk.center) - disk.radius) < kSingularDistance)
      singular("circle", p.lambda);
  }
}

void check_rect(const CharacteristicFunction& cf, const RectRegion& r) {
  if (!(r.x0 < r.x1 && r.y0 < r.y1)) fail(ErrorKind::InvalidArgument, "degenerate rectangle");
  if (r.y0 <= kSingularDistance && r.y1 >= -kSingularDistance) {
    for (double x : {r.x0, r.x1}) {
      const auto near = cf.poles_between(x - kSingularDistance, x + kSingularDistance);
      if (!near.empty()) singular("rectangle side", near.front().lambda);
    }
  }
  for (double y : {r.y0, r.y1}) {
    if (std::abs(y) < kSingularDistance) {
      const auto near = cf.poles_between(r.x0 - kSingularDistance, r.x1 + kSingularDistance);
      if (!near.empty()) singular("rectangle side", near.front().lambda);
    }
  }
}

// Winding from argument increments between consecutive samples.
void argument_count(std::vector<Sample>& samples, int& count, double& max_step) {
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.s < b.s; });
  double total = 0.0;
  max_step = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const cplx next = samples[(j + 1) % samples.size()].f;
    const double step = std::arg(next / samples[j].f);
    max_step = std::max(max_step, std::abs(step));
    total += step;
  }
  count = static_cast<int>(std::lround(total / kTwoPi));
}

WindingResult finish(Accumulator& acc, int points) {
  WindingResult w;
  w.quadrature_points = points;
  w.evaluations = acc.evaluations;
  w.integral = acc.integral / cplx(0.0, kTwoPi);
  w.quadrature_error = acc.error / kTwoPi;
  w.min_abs_f = acc.min_abs_f;
  w.max_eval_error = acc.max_eval_error;
  w.budget_exhausted = acc.exhausted;
  argument_count(acc.samples, w.argument_count, w.max_argument_step);
  if (!acc.finite || !std::isfinite(w.integral.real()) || !std::isfinite(w.integral.imag())) {
    w.count = 0;
    w.certified = false;
    return w;
  }
  w.count = static_cast<int>(std::lround(w.integral.real()));
  const double deviation = std::abs(w.integral - cplx(w.count, 0.0));
  const double rounding_gap = 0.5 - deviation;
  w.certified = !acc.exhausted && w.quadrature_error < rounding_gap && w.min_abs_f > 2.0 * w.max_eval_error &&
                w.argument_count == w.count && w.max_argument_step <= kMaxArgumentStep;
  return w;
}

WindingResult disk_winding(const CharacteristicFunction& cf, const DiskRegion& disk, int points) {
  check_disk(cf, disk);
  if (!(disk.radius > 0.0)) fail(ErrorKind::InvalidArgument, "circle radius must be positive");
  const int n = std::max(8, points + (points % 2));
  Accumulator acc;
  acc.samples.reserve(static_cast<std::size_t>(n));
  cplx full{0.0, 0.0};
  cplx half{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * j / n;
    const cplx offset = std::polar(disk.radius, theta);
    const cplx term = acc.log_derivative(cf, disk.center + offset, theta) * offset;
    full += term;
    if (j % 2 == 0) half += term;
  }
  // (1/Q) sum g(z_j) (z_j - c) approximates (1 / 2 pi i) * integral; scale back by 2 pi i.
  full *= cplx(0.0, kTwoPi) / static_cast<double>(n);
  half *= cplx(0.0, kTwoPi) / static_cast<double>(n / 2);
  acc.integral = full;
  acc.error = std::abs(full - half);
  return finish(acc, n);
}

struct GaussKronrodRule {
  std::array<double, 8> x{};
  std::array<double, 8> wk{};
  std::array<double, 4> wg{};

  GaussKronrodRule() {
    const auto& kx = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
    const auto& kw = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
    const auto& gw = boost::math::quadrature::gauss<double, 7>::weights();
    for (std::size_t i = 0; i < 8; ++i) {
      x[i] = kx[i];
      wk[i] = kw[i];
    }
    for (std::size_t i = 0; i < 4; ++i) wg[i] = gw[i];
  }
};

const GaussKronrodRule& gk_rule() {
  static const GaussKronrodRule rule;
  return rule;
}

struct Panel {
  double t0;
  double t1;
  int depth;
};

// Adaptive composite GK15 over the segment a -> b; edge_index orders samples.
void integrate_edge(const CharacteristicFunction& cf, cplx a, cplx b, int edge_index, int initial_panels,
                    double tolerance_density, Accumulator& acc) {
  const GaussKronrodRule& rule = gk_rule();
  const cplx span = b - a;
  const double length = std::abs(span);
  std::vector<Panel> stack;
  for (int i = initial_panels - 1; i >= 0; --i)
    stack.push_back({static_cast<double>(i) / initial_panels, static_cast<double>(i + 1) / initial_panels, 0});

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.t0 + p.t1);
    const double half = 0.5 * (p.t1 - p.t0);
    cplx kronrod{0.0, 0.0};
    cplx gauss{0.0, 0.0};
    double magnitude = 0.0;
    const auto node = [&](double t) { return acc.log_derivative(cf, a + t * span, edge_index + t); };
    const cplx g0 = node(mid);
    kronrod += rule.wk[0] * g0;
    gauss += rule.wg[0] * g0;
    magnitude += rule.wk[0] * std::abs(g0);
    for (std::size_t i = 1; i < 8; ++i) {
      const cplx left = node(mid - half * rule.x[i]);
      const cplx right = node(mid + half * rule.x[i]);
      kronrod += rule.wk[i] * (left + right);
      if (i % 2 == 0) gauss += rule.wg[i / 2] * (left + right);
      magnitude += rule.wk[i] * (std::abs(left) + std::abs(right));
    }
    const cplx scale = span * half;
    kronrod *= scale;
    gauss *= scale;
    magnitude *= std::abs(scale);
    // The Kronrod-Gauss difference cannot drop below the rounding in the sums.
    const double err = std::max(std::abs(kronrod - gauss), 50.0 * 0x1p-52 * magnitude);
    const double allowed = std::max(tolerance_density * length * (p.t1 - p.t0), 100.0 * 0x1p-52 * magnitude);
    const bool finite = std::isfinite(err);
    if (acc.evaluations > acc.budget) acc.exhausted = true;
    if ((finite && err <= allowed) || p.depth >= kMaxPanelDepth || !acc.finite || acc.exhausted) {
      acc.integral += kronrod;
      acc.error += finite ? err : kInf;
      continue;
    }
    stack.push_back({mid, p.t1, p.depth + 1});
    stack.push_back({p.t0, mid, p.depth + 1});
  }
}

WindingResult rect_winding(const CharacteristicFunction& cf, const RectRegion& r, int points) {
  check_rect(cf, r);
  const double d = cf.gap();
  const std::array<cplx, 4> corners = {cplx(r.x0, r.y0), cplx(r.x1, r.y0), cplx(r.x1, r.y1), cplx(r.x0, r.y1)};
  const double perimeter = 2.0 * ((r.x1 - r.x0) + (r.y1 - r.y0));
  const double tolerance_density = kEdgeTolerance * kTwoPi / perimeter;
  const int min_panels = std::max(1, points / 60);
  Accumulator acc;
  acc.budget = kEvaluationsPerPoint * std::max(points, 256);
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[static_cast<std::size_t>(e)];
    const cplx b = corners[static_cast<std::size_t>((e + 1) % 4)];
    const double length = std::abs(b - a);
    // Panels no longer than the distance to the real axis resolve nearby poles.
    double dist = std::min(std::abs(a.imag()), std::abs(b.imag()));
    if (a.imag() * b.imag() <= 0.0) dist = 0.0;
    const double h = std::max(d / 4.0, 0.5 * dist);
    const int panels = std::max(min_panels, static_cast<int>(std::ceil(length / h)));
    integrate_edge(cf, a, b, e, std::min(panels, 1 << 20), tolerance_density, acc);
  }
  return finish(acc, points);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double RectRegion::diameter() const noexcept { return std::hypot(x1 - x0, y1 - y0); }

Index poles_inside(const CharacteristicFunction& cf, const Region& region) {
  if (const auto* disk = std::get_if<DiskRegion>(&region)) {
    const double cy = disk->center.imag();
    if (std::abs(cy) >= disk->radius) return 0;
    const double w = std::sqrt(disk->radius * disk->radius - cy * cy);
    return cf.count_poles_between(disk->center.real() - w, disk->center.real() + w);
  }
  const auto& r = std::get<RectRegion>(region);
  if (!(r.y0 < 0.0 && r.y1 > 0.0)) return 0;
  return cf.count_poles_between(r.x0, r.x1);
}

WindingResult winding_number(const CharacteristicFunction& cf, const Region& region, int quadrature_points) {
  if (quadrature_points < 4) fail(ErrorKind::InvalidArgument, "at least 4 quadrature points are required");
  WindingResult w = std::holds_alternative<DiskRegion>(region)
                        ? disk_winding(cf, std::get<DiskRegion>(region), quadrature_points)
                        : rect_winding(cf, std::get<RectRegion>(region), quadrature_points);
  w.poles_inside = poles_inside(cf, region);
  return w;
}

WindingResult winding_with_escalation(const CharacteristicFunction& cf, const Region& region,
                                      int initial_points, int max_points) {
  int points = initial_points;
  WindingResult w = winding_number(cf, region, points);
  while (!w.certified && !w.budget_exhausted && points < max_points) {
    points = std::min(2 * points, max_points);
    w = winding_number(cf, region, points);
  }
  return w;
}

double cluster_radius(const CharacteristicFunction& cf, cplx z, int order, double cluster_tol) {
  const double floor = cluster_tol * cf.gap();
  const Evaluation f = cf.eval(z);
  const Evaluation dm = cf.derivative(z, order);
  const double mag = std::abs(dm.value);
  if (!(mag > 0.0)) return floor;
  const double precision = std::pow(factorial(order) * f.error_bound / mag, 1.0 / order);
  return std::max(floor, 10.0 * precision);
}

RefinedZero refine_zero(const CharacteristicFunction& cf, cplx seed, int order_hint, const RefineOptions& options) {
  if (order_hint < 1) fail(ErrorKind::InvalidArgument, "zero order must be positive");
  const double max_step = options.max_step > 0.0 ? options.max_step : cf.gap();
  const auto step_at = [&](cplx z) -> cplx {
    if (order_hint == 1) {
      const auto [f, df] = cf.eval_with_derivative(z);
      return f.value / df.value;
    }
    return cf.derivative(z, order_hint - 1).value / cf.derivative(z, order_hint).value;
  };

  cplx z = seed;
  double last = kInf;
  bool converged = false;
  try {
    for (int it = 0; it < 100; ++it) {
      cplx step = step_at(z);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      double size = std::abs(step);
      if (size > max_step) {
        step *= max_step / size;
        size = max_step;
      }
      z -= step;
      const double scale = std::max(1.0, std::abs(z));
      if (size <= 8e-16 * scale) {
        converged = true;
        break;
      }
      // Rounding noise: the step stopped shrinking at a tiny size.
      if (size <= 1e-11 * scale && size >= 0.5 * last) {
        converged = true;
        break;
      }
      last = size;
    }
  } catch (const SpectralError& e) {
    if (e.kind() != ErrorKind::PoleHit) throw;
    converged = false;
  }
  if (!converged)
    fail(ErrorKind::NoConvergence, "Newton iteration from (" + std::to_string(seed.real()) + ", " +
                                       std::to_string(seed.imag()) + ") did not converge");

  const auto [f, df] = cf.eval_with_derivative(z);
  RefinedZero out{z, order_hint, std::abs(f.value)};
  // Next to a pole |F'| is huge and rounding z alone moves F far above tol;
  // the residual is then judged against what the representable z allows.
  const double attainable = 4.0 * (f.error_bound + std::abs(df.value) * 0x1p-52 * std::max(1.0, std::abs(z)));
  if (!(out.residual <= std::max(options.tol, attainable)))
    fail(ErrorKind::NoConvergence, "residual |F| = " + std::to_string(out.residual) + " exceeds tolerance");

  if (options.confirm_order) {
    const double rho = cluster_radius(cf, z, order_hint, options.cluster_tol);
    const WindingResult w = winding_with_escalation(cf, DiskRegion{z, rho}, options.quadrature_points,
                                                    options.max_quadrature_points);
    if (!w.certified) fail(ErrorKind::CertificationFailed, "zero order could not be certified");
    if (w.zeros() != order_hint)
      fail(ErrorKind::OrderMismatch, "expected order " + std::to_string(order_hint) + ", contour counts " +
                                         std::to_string(w.zeros()));
  }
  return out;
}

}  // namespace rank1
