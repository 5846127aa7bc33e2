#include "rank1/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rank1/error.hpp"

namespace rank1::gallery {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Check make_check(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

}  // namespace

BaseSpectrum example_periodic_base() {
  BaseSpectrum spec;
  spec.index_set = IndexSet::Integers;
  spec.tail = {1.0, 0.0};
  spec.gap = 1.0;
  return validate_base(spec);
}

PerturbationCoefficients example_51() {
  PerturbationCoefficients c;
  c.a.head_offset = 0;
  c.a.head = {cplx(1.0)};
  c.a.tail = PowerTail{0.5, 1.0, 0.0, 0.0, Parity::Even};
  c.b.head_offset = 0;
  c.b.head = {cplx(0.0)};
  c.b.tail = PowerTail{0.5, 1.0, 0.0, 0.0, Parity::Odd};
  return c;
}

cplx example_51_closed_form(cplx z) {
  return (z * z + 1.0) / (z * z) - (kPi / z) * std::cos(kPi * z) / std::sin(kPi * z);
}

DirectOptions example_51_options(Index window) {
  DirectOptions o;
  o.allow_nonsummable = true;
  o.central_radius = 2;
  o.window = window;
  return o;
}

PerturbationCoefficients example_52(double beta) {
  if (!(beta > 1.0)) fail(ErrorKind::BetaOutOfRange, "beta must exceed 1, got " + format(beta));
  PerturbationCoefficients c;
  c.a.head_offset = 0;
  c.a.head = {cplx(1.0)};
  c.a.tail = PowerTail{beta, 1.0, 0.0, 0.0, Parity::Even};
  c.b.head_offset = 0;
  c.b.head = {cplx(0.0)};
  c.b.tail = PowerTail{beta, 1.0, 0.0, 0.0, Parity::Even};
  return c;
}

double example_52_residue_exponent(double beta) { return 2.0 * beta; }

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::InvalidArgument, "linear fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::vector<Check> report_periodic() {
  const BaseSpectrum spec = example_periodic_base();
  std::vector<Check> out;
  out.push_back(make_check("gap equals 1", spec.gap == 1.0 && spec.certified_gap == 1.0, format(spec.gap)));
  out.push_back(make_check("lambda_0 equals 0", spec.lambda(0) == 0.0, format(spec.lambda(0))));
  bool monotone = true;
  for (Index n = -50; n < 50; ++n) monotone = monotone && spec.lambda(n) < spec.lambda(n + 1);
  out.push_back(make_check("monotone increasing", monotone, "checked on |n| <= 50"));

  PerturbationCoefficients zero;
  DirectOptions o;
  o.window = 10;
  const DirectResult r = solve_direct(spec, zero, o);
  bool same = r.spectrum.certified;
  for (const SpectrumEntry& e : r.spectrum.entries)
    same = same && e.mu == cplx(spec.lambda(e.paired_index)) && e.origin == Origin::CommonWithA;
  out.push_back(make_check("unperturbed spectrum equals lambda", same,
                           std::to_string(r.spectrum.entries.size()) + " entries"));
  return out;
}

std::vector<Check> report_51(Index window) {
  if (window < 1) fail(ErrorKind::InvalidArgument, "window must be at least 1");
  const BaseSpectrum spec = example_periodic_base();
  const PerturbationCoefficients coeffs = example_51();
  std::vector<Check> out;

  bool rejected = false;
  try {
    validate_coefficients(coeffs, spec);
  } catch (const SpectralError& e) {
    rejected = e.kind() == ErrorKind::NonSummable;
  }
  out.push_back(make_check("coefficients fail l2 validation without bypass", rejected, ""));

  const DirectResult r = solve_direct(spec, coeffs, example_51_options(window));
  double tan_residual = 0.0;
  double asymptotic = 0.0;
  for (Index n = 1; n <= std::min<Index>(window, 200); ++n) {
    for (Index k : {n, -n}) {
      const SpectrumEntry* e = r.spectrum.find(k);
      if (!e) {
        tan_residual = kInf;
        continue;
      }
      const cplx mu = e->mu;
      tan_residual = std::max(tan_residual, std::abs(std::tan(kPi * mu) - kPi * mu / (mu * mu + 1.0)));
    }
  }
  for (Index n = 100; n <= window; ++n) {
    const SpectrumEntry* e = r.spectrum.find(n);
    asymptotic = std::max(asymptotic, e ? std::abs(static_cast<double>(n) * (e->mu - cplx(n)) - 1.0) : kInf);
  }
  out.push_back(make_check("tan equation residual < 1e-8", tan_residual < 1e-8, "max " + format(tan_residual)));
  out.push_back(make_check("|n(mu_n - n) - 1| < 0.05 for n >= 100", asymptotic < 0.05,
                           window >= 100 ? "max " + format(asymptotic) : "window below 100, vacuous"));

  const std::vector<double> partial = r.spectrum.offset_partial_sums();
  std::vector<double> xs, ys;
  for (Index big_n = 10; big_n <= window && big_n < static_cast<Index>(partial.size()); ++big_n) {
    xs.push_back(std::log(static_cast<double>(big_n)));
    ys.push_back(partial[static_cast<std::size_t>(big_n)]);
  }
  if (xs.size() >= 2) {
    // Two-sided sums of 1/|n| grow like 2 log N.
    const double coefficient = linear_fit(xs, ys).first / 2.0;
    out.push_back(make_check("offset partial sums grow like log N", coefficient >= 0.8 && coefficient <= 1.2,
                             "coefficient " + format(coefficient)));
  } else {
    out.push_back(make_check("offset partial sums grow like log N", false, "window below 11"));
  }
  return out;
}

std::vector<Check> report_52(double beta, Index window) {
  if (window < 1) fail(ErrorKind::InvalidArgument, "window must be at least 1");
  const BaseSpectrum spec = example_periodic_base();
  const PerturbationCoefficients coeffs = example_52(beta);
  const double exponent = example_52_residue_exponent(beta);
  DirectOptions o;
  o.window = window;
  const DirectResult r = solve_direct(spec, coeffs, o);
  const Localization& loc = r.localization;
  std::vector<Check> out;

  bool one_each = true;
  for (const ZeroReport& z : loc.reports)
    if (z.kind == RegionKind::Disk) one_each = one_each && z.winding.certified && z.zero_count() == 1;
  out.push_back(make_check("exactly one zero per disk beyond K'", one_each,
                           std::to_string(loc.reports.size() - 1) + " disks, K' = " + std::to_string(loc.k_eps_prime)));

  Index n_k = 0;
  for (Index n = -loc.k_eps_prime; n <= loc.k_eps_prime; ++n)
    if (std::conj(coeffs.a(n)) * coeffs.b(n) != cplx(0.0)) ++n_k;
  const int central = loc.central_report().zero_count();
  out.push_back(make_check("central count equals N_k", central == n_k,
                           std::to_string(central) + " zeros, N_k = " + std::to_string(n_k)));

  std::vector<double> xs, ys;
  for (Index n = 20; n <= std::min<Index>(window, 200); ++n) {
    const SpectrumEntry* e = r.spectrum.find(n);
    if (!e || !(e->offset > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(e->offset));
  }
  if (xs.size() >= 2) {
    const double slope = linear_fit(xs, ys).first;
    out.push_back(make_check("slope within 5%", std::abs(slope + exponent) <= 0.05 * exponent,
                             "slope " + format(slope) + ", expected " + format(-exponent)));
  } else {
    out.push_back(make_check("slope within 5%", false, "window below 21"));
  }

  // The asymptotic regime starts outside the central rectangle.
  double lo = kInf, hi = 0.0;
  for (Index n = loc.k_eps_prime + 1; n <= window; ++n) {
    for (Index k : {n, -n}) {
      const SpectrumEntry* e = r.spectrum.find(k);
      if (!e) continue;
      const double scaled = e->offset * std::pow(static_cast<double>(n), exponent);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
  }
  out.push_back(make_check("two-sided bound C/c < 10", lo > 0.0 && hi / lo < 10.0, "C/c = " + format(hi / lo) + " over |n| > K'"));

  // offset sum over |n| <= r plus (d / 2 eps) T(r) for r = window/4, window/2, window
  const double d = spec.gap;
  const double eps = 0.9 * d / (d + 4.0);
  const CharacteristicFunction cf(spec, validate_coefficients(coeffs, spec), 0);
  const Index k_prime = cf.compute_keps(eps).second;
  const std::vector<double> partial = r.spectrum.offset_partial_sums();
  std::vector<double> totals;
  for (Index radius : {window / 4, window / 2, window}) {
    if (radius < k_prime || radius >= static_cast<Index>(partial.size())) continue;
    totals.push_back(partial[static_cast<std::size_t>(radius)] + d / (2.0 * eps) * cf.tail_sum(radius));
  }
  bool monotone = !totals.empty() && std::isfinite(totals.back());
  for (std::size_t i = 1; i < totals.size(); ++i) monotone = monotone && totals[i] <= totals[i - 1];
  out.push_back(make_check("summability certificate nonincreasing", monotone,
                           totals.empty() ? "window below K'" : "final total " + format(totals.back())));
  return out;
}

}  // namespace rank1::gallery
