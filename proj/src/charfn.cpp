#include "rank1/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rank1/error.hpp"
#include "special.hpp"

namespace rank1 {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;
constexpr double kPoleTolerance = 1e-12;
constexpr double kMaxSeriesRatio = 0.5;
constexpr int kMaxMoments = 96;
constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// k! / (k - p)!
double falling(int k, int p) {
  double f = 1.0;
  for (int i = 0; i < p; ++i) f *= k - i;
  return f;
}

Index lambda_head_radius(const BaseSpectrum& spec) {
  if (spec.head.empty()) return 0;
  const Index last = spec.head_offset + static_cast<Index>(spec.head.size()) - 1;
  return std::max(radius_of(spec.head_offset), radius_of(last));
}

}  // namespace

CharacteristicFunction::CharacteristicFunction(BaseSpectrum spec, ValidatedCoefficients coeffs,
                                               Index truncation)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)), truncation_(truncation) {
  if (truncation_ < 0) fail(ErrorKind::InvalidArgument, "truncation radius must be non-negative");
  explicit_radius_ = std::max({truncation_, coeffs_.extent, lambda_head_radius(spec_)});

  const Window w = window(spec_.index_set, explicit_radius_);
  for (Index n = w.lo; n <= w.hi; ++n) {
    const cplx cn = coeffs_.coeffs.c(n);
    if (cn != cplx(0.0)) poles_.push_back({n, spec_.lambda(n), cn, std::abs(cn)});
  }
  summation_order_ = poles_;
  std::stable_sort(summation_order_.begin(), summation_order_.end(), [](const Pole& x, const Pole& y) {
    return radius_of(x.index) > radius_of(y.index);
  });

  tail_total_ = coeffs_.tail.abs_sum_beyond(spec_.index_set, explicit_radius_);

  const CoefficientTail& tail = coeffs_.tail;
  if (!tail.zero && tail.exact) {
    TailSeries& s = series_;
    s.active = true;
    s.two_sided = spec_.index_set == IndexSet::Integers;
    s.slope = spec_.tail.slope;
    s.center_pos = spec_.tail.intercept - s.slope * tail.shift;
    s.center_neg = spec_.tail.intercept + s.slope * tail.shift;
    s.q = static_cast<double>(explicit_radius_ + 1) + tail.shift;
    s.pos = tail.pos;
    s.neg = tail.neg;
    s.zeta1 = detail::hurwitz_zeta(tail.gamma + 1.0, s.q);
    double scale = 1.0 / s.slope;
    for (int k = 0; k < kMaxMoments; ++k) {
      const double m = detail::hurwitz_zeta(tail.gamma + k + 1.0, s.q) * scale;
      if (m == 0.0 || !std::isfinite(m)) break;
      s.moments.push_back(m);
      scale /= s.slope;
    }
  }
}

std::span<const Pole> CharacteristicFunction::poles_between(double x0, double x1) const noexcept {
  auto lo = std::upper_bound(poles_.begin(), poles_.end(), x0,
                             [](double x, const Pole& p) { return x < p.lambda; });
  auto hi = std::lower_bound(poles_.begin(), poles_.end(), x1,
                             [](const Pole& p, double x) { return p.lambda < x; });
  if (hi < lo) hi = lo;
  return {lo, hi};
}

Index CharacteristicFunction::count_poles_between(double x0, double x1) const {
  Index count = static_cast<Index>(poles_between(x0, x1).size());
  if (coeffs_.tail.zero) return count;
  // Tail poles lambda_n = slope * n + intercept, |n| > explicit radius.
  const double s = spec_.tail.slope;
  const double t = spec_.tail.intercept;
  const auto count_range = [&](Index lo, Index hi) {
    // n in [lo, hi] with x0 < s n + t < x1
    const double a = (x0 - t) / s;
    const double b = (x1 - t) / s;
    Index first = static_cast<Index>(std::floor(a)) + 1;
    Index last = static_cast<Index>(std::ceil(b)) - 1;
    first = std::max(first, lo);
    last = std::min(last, hi);
    return last >= first ? last - first + 1 : Index{0};
  };
  const Index big = std::numeric_limits<Index>::max() / 4;
  count += count_range(explicit_radius_ + 1, big);
  if (spec_.index_set == IndexSet::Integers) count += count_range(-big, -explicit_radius_ - 1);
  return count;
}

double CharacteristicFunction::distance_to_tail_pole(cplx z) const {
  const double s = spec_.tail.slope;
  const double t = spec_.tail.intercept;
  const Index n_min = explicit_radius_ + 1;
  const auto dist_side = [&](double sign) {
    // n = sign * m, m >= n_min
    const double m_star = sign * (z.real() - t) / s;
    Index m = std::max<Index>(n_min, static_cast<Index>(std::llround(std::max(m_star, 0.0))));
    double best = kInf;
    for (Index j = std::max(n_min, m - 1); j <= m + 1; ++j)
      best = std::min(best, std::abs(z - cplx(sign * s * static_cast<double>(j) + t, 0.0)));
    return best;
  };
  double d = dist_side(1.0);
  if (spec_.index_set == IndexSet::Integers) d = std::min(d, dist_side(-1.0));
  return d;
}

double CharacteristicFunction::distance_to_nearest_pole(cplx z) const {
  double best = kInf;
  auto it = std::lower_bound(poles_.begin(), poles_.end(), z.real(),
                             [](const Pole& p, double x) { return p.lambda < x; });
  if (it != poles_.end()) best = std::min(best, std::abs(z - it->lambda));
  if (it != poles_.begin()) best = std::min(best, std::abs(z - std::prev(it)->lambda));
  if (!coeffs_.tail.zero) best = std::min(best, distance_to_tail_pole(z));
  return best;
}

bool CharacteristicFunction::near_pole(cplx z) const {
  auto it = std::lower_bound(poles_.begin(), poles_.end(), z.real(),
                             [](const Pole& p, double x) { return p.lambda < x; });
  const auto hit = [&](double lambda) {
    return std::abs(z - lambda) < kPoleTolerance * std::max(1.0, std::abs(lambda));
  };
  if (it != poles_.end() && hit(it->lambda)) return true;
  if (it != poles_.begin() && hit(std::prev(it)->lambda)) return true;
  if (!coeffs_.tail.zero) {
    const double d = distance_to_tail_pole(z);
    if (d < kPoleTolerance * std::max(1.0, std::abs(z))) return true;
  }
  return false;
}

void CharacteristicFunction::check_pole(cplx z) const {
  if (near_pole(z))
    fail(ErrorKind::PoleHit, "F evaluated at a pole near z = (" + std::to_string(z.real()) + ", " +
                                 std::to_string(z.imag()) + ")");
}

bool CharacteristicFunction::tail_series(cplx z, int order, cplx& value, double& bound) const {
  const TailSeries& s = series_;
  const double radius = s.slope * s.q;
  const cplx u = z - s.center_pos;
  const cplx v = z - s.center_neg;
  const double ratio = std::max(std::abs(u), s.two_sided ? std::abs(v) : 0.0) / radius;
  if (ratio > kMaxSeriesRatio || s.moments.empty()) return false;

  const int kmax = static_cast<int>(s.moments.size()) - 1;
  const auto sum_side = [&](cplx w) {
    cplx sum = 0.0;
    cplx power = 1.0;
    for (int k = order; k <= kmax; ++k) {
      const cplx term = s.moments[static_cast<std::size_t>(k)] * falling(k, order) * power;
      sum += term;
      power *= w;
      if (k > order + 4 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  };
  // Each side's partial sum stops early only once its terms are negligible;
  // the remainder bound below covers every term from kmax + 1 on, which
  // dominates whatever was dropped.
  value = s.pos * sum_side(u);
  if (s.two_sided) {
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    value -= s.neg * sign * sum_side(-v);
  }

  // sum_{k > kmax} k!/(k-order)! ratio^(k-order); consecutive terms differ by ratio k/(k-order).
  double remainder = 0.0;
  {
    int k = kmax + 1;
    double term = falling(k, order) * std::pow(ratio, k - order);
    while (term > 1e-30 * remainder && k < kmax + 4000) {
      remainder += term;
      ++k;
      term *= ratio * k / (k - order);
    }
  }
  // Terms dropped by the early stop are below 1e-18 relative each.
  const double scale = (std::abs(s.pos) + (s.two_sided ? std::abs(s.neg) : 0.0)) * s.zeta1 / s.slope *
                       std::pow(radius, -order);
  bound = scale * remainder + 1e-16 * std::abs(value);
  return true;
}

double CharacteristicFunction::tail_fallback_bound(cplx z, int order) const {
  if (tail_total_ == 0.0) return 0.0;
  const double delta = distance_to_tail_pole(z);
  return tail_total_ * factorial(order) / std::pow(delta, order + 1);
}

Evaluation CharacteristicFunction::eval_order(cplx z, int order) const {
  check_pole(z);
  cplx sum = 0.0;
  double abs_sum = 0.0;
  const double pf = factorial(order);
  const double x = z.real();
  const double y = z.imag();
  for (const Pole& p : summation_order_) {
    // 1 / (lambda - z) in real arithmetic; std::complex division is far slower.
    const double a = p.lambda - x;
    const double inv_r2 = 1.0 / (a * a + y * y);
    const cplx inv(a * inv_r2, y * inv_r2);
    cplx term = p.c * inv;
    for (int k = 0; k < order; ++k) term *= inv;
    term *= pf;
    sum += term;
    abs_sum += pf * p.abs_c * std::pow(inv_r2, 0.5 * (order + 1));
  }
  double bound = 0.0;
  if (!coeffs_.tail.zero) {
    cplx tail_value;
    double tail_bound = 0.0;
    if (series_.active && tail_series(z, order, tail_value, tail_bound)) {
      sum += tail_value;
      abs_sum += std::abs(tail_value);
      bound += tail_bound;
    } else {
      bound += tail_fallback_bound(z, order);
    }
  }
  // The leading 1 is exact; it only enters the rounding bound once something is added to it.
  const bool constant = summation_order_.empty() && coeffs_.tail.zero;
  if (order == 0) {
    sum += 1.0;
    if (!constant) abs_sum += 1.0;
  }
  bound += kUnitRoundoff * (static_cast<double>(summation_order_.size()) + order + 3) * abs_sum;
  return {sum, bound};
}

Evaluation CharacteristicFunction::eval(cplx z) const { return eval_order(z, 0); }

Evaluation CharacteristicFunction::derivative(cplx z, int order) const {
  if (order < 1) fail(ErrorKind::InvalidArgument, "derivative order must be positive");
  return eval_order(z, order);
}

std::pair<Evaluation, Evaluation> CharacteristicFunction::eval_with_derivative(cplx z) const {
  check_pole(z);
  cplx f = 1.0;
  cplx df = 0.0;
  double abs_f = 1.0;
  double abs_df = 0.0;
  const double x = z.real();
  const double y = z.imag();
  for (const Pole& p : summation_order_) {
    const double a = p.lambda - x;
    const double inv_r2 = 1.0 / (a * a + y * y);
    const cplx inv(a * inv_r2, y * inv_r2);
    const cplx term = p.c * inv;
    f += term;
    df += term * inv;
    abs_f += p.abs_c * std::sqrt(inv_r2);
    abs_df += p.abs_c * inv_r2;
  }
  double bound_f = 0.0;
  double bound_df = 0.0;
  if (!coeffs_.tail.zero) {
    cplx tv0, tv1;
    double tb0 = 0.0;
    double tb1 = 0.0;
    if (series_.active && tail_series(z, 0, tv0, tb0) && tail_series(z, 1, tv1, tb1)) {
      f += tv0;
      df += tv1;
      abs_f += std::abs(tv0);
      abs_df += std::abs(tv1);
      bound_f += tb0;
      bound_df += tb1;
    } else {
      bound_f += tail_fallback_bound(z, 0);
      bound_df += tail_fallback_bound(z, 1);
    }
  }
  const double n = static_cast<double>(summation_order_.size()) + 4;
  if (summation_order_.empty() && coeffs_.tail.zero) abs_f = 0.0;
  bound_f += kUnitRoundoff * n * abs_f;
  bound_df += kUnitRoundoff * n * abs_df;
  return {{f, bound_f}, {df, bound_df}};
}

cplx CharacteristicFunction::eval_G(Index k, cplx z) const {
  const cplx ck = c(k);
  if (!spec_.has_index(k) || ck == cplx(0.0))
    fail(ErrorKind::IndexNotInI1, "index " + std::to_string(k) + " is not in I1");
  const double lk = lambda(k);
  if (std::abs(z - lk) < kPoleTolerance * std::max(1.0, std::abs(lk)))
    fail(ErrorKind::PoleHit, "G_k evaluated at its pole");
  return 1.0 + ck / (lk - z);
}

cplx CharacteristicFunction::eval_H(Index k, cplx z) const {
  const Window w = window(spec_.index_set, radius_of(k));
  cplx sum = 0.0;
  for (Index r = radius_of(k); r >= 0; --r) {
    for (int side = 0; side < (r == 0 ? 1 : 2); ++side) {
      const Index n = side == 0 ? r : -r;
      if (!w.contains(n)) continue;
      const cplx cn = c(n);
      if (cn == cplx(0.0)) continue;
      const double ln = lambda(n);
      if (std::abs(z - ln) < kPoleTolerance * std::max(1.0, std::abs(ln)))
        fail(ErrorKind::PoleHit, "H_k evaluated at a pole");
      sum += cn / (ln - z);
    }
  }
  return sum + 1.0;
}

std::pair<Index, Index> CharacteristicFunction::compute_keps(double eps) const {
  const double d = spec_.gap;
  if (!(eps > 0.0 && eps < d / 2.0))
    fail(ErrorKind::EpsOutOfRange, "eps must satisfy 0 < eps < d/2");

  const ValidatedCoefficients& v = coeffs_;
  const Index extent = v.extent;
  const Window ew = window(spec_.index_set, extent);
  const auto radius_abs = [&](Index r) {
    double s = 0.0;
    if (ew.contains(r)) s += std::abs(v.coeffs.c(r));
    if (r != 0 && ew.contains(-r)) s += std::abs(v.coeffs.c(-r));
    return s;
  };

  Index k_eps = 0;
  double t = v.tail.abs_sum_beyond(spec_.index_set, extent);
  if (std::isinf(t)) fail(ErrorKind::NonSummable, "sum of |c_n| diverges; no K_eps exists");
  if (t < eps) {
    Index w = extent;
    while (w > 0) {
      const double next = t + radius_abs(w);
      if (!(next < eps)) break;
      t = next;
      --w;
    }
    k_eps = w;
  } else {
    Index lo = extent;
    Index hi = std::max<Index>(extent, 1);
    while (!(v.tail.abs_sum_beyond(spec_.index_set, hi) < eps)) {
      lo = hi;
      if (hi > (Index{1} << 50)) fail(ErrorKind::NonSummable, "tail sum does not drop below eps");
      hi *= 2;
    }
    while (hi - lo > 1) {
      const Index mid = lo + (hi - lo) / 2;
      if (v.tail.abs_sum_beyond(spec_.index_set, mid) < eps)
        hi = mid;
      else
        lo = mid;
    }
    k_eps = hi;
  }

  const Window kw = window(spec_.index_set, k_eps);
  double head_sum = 0.0;
  for (Index n = kw.lo; n <= kw.hi; ++n) head_sum += std::abs(v.coeffs.c(n));
  const Index k_prime = k_eps + static_cast<Index>(std::floor(head_sum / (eps * d))) + 1;
  return {k_eps, k_prime};
}

}  // namespace rank1
