#include "rank1/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rank1/error.hpp"

namespace rank1 {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;

bool equals_lambda(cplx v, double lambda) { return v.imag() == 0.0 && v.real() == lambda; }

Index head_end(const TargetSpectrum& t) { return t.head_offset + static_cast<Index>(t.head.size()); }

}  // namespace

TargetSplit split_target(const BaseSpectrum& spec, const TargetSpectrum& target) {
  const TargetSpectrum checked = validate_target(target, spec);
  TargetSplit out;
  out.normalized = checked;
  std::vector<cplx>& v = out.normalized.head;
  const Index lo = checked.head_offset;
  const Index hi = head_end(checked);
  const auto at = [&](Index n) -> cplx& { return v[static_cast<std::size_t>(n - lo)]; };

  // A value equal to lambda_n moves to position n unless n already holds it.
  // Each swap fixes one more position, so the loop terminates.
  for (Index p = lo; p < hi; ++p) {
    for (std::size_t guard = 0; guard <= v.size(); ++guard) {
      const cplx value = at(p);
      if (equals_lambda(value, spec.lambda(p))) break;
      Index target_pos = hi;
      for (Index n = lo; n < hi; ++n) {
        if (n != p && equals_lambda(value, spec.lambda(n)) && !equals_lambda(at(n), spec.lambda(n))) {
          target_pos = n;
          break;
        }
      }
      if (target_pos == hi) break;
      std::swap(at(p), at(target_pos));
    }
  }
  for (Index n = lo; n < hi; ++n) (equals_lambda(at(n), spec.lambda(n)) ? out.i0 : out.i1).push_back(n);
  return out;
}

ProductFunction::ProductFunction(BaseSpectrum spec, const TargetSpectrum& target)
    : spec_(validate_base(std::move(spec))), split_(split_target(spec_, target)) {}

double ProductFunction::total_deviation() const noexcept {
  double s = 0.0;
  for (Index n : split_.i1) s += std::abs(nu(n) - lambda(n));
  return s;
}

void ProductFunction::check_pole(cplx z) const {
  for (Index n : split_.i1) {
    const double l = lambda(n);
    if (std::abs(z - l) < 1e-12 * std::max(1.0, std::abs(l)))
      fail(ErrorKind::PoleHit, "product evaluated at lambda_" + std::to_string(n));
  }
}

cplx ProductFunction::eval(cplx z) const { return eval_with_bound(z).value; }

Evaluation ProductFunction::eval_with_bound(cplx z) const {
  check_pole(z);
  cplx p = 1.0;
  for (Index n : split_.i1) p *= (nu(n) - z) / (lambda(n) - z);
  // Each factor carries a relative error of a few units of roundoff.
  const double rel = 8.0 * kUnitRoundoff * (static_cast<double>(split_.i1.size()) + 1.0);
  return {p, rel * std::abs(p)};
}

cplx ProductFunction::derivative(cplx z) const {
  check_pole(z);
  const std::size_t m = split_.i1.size();
  std::vector<cplx> f(m);
  std::vector<cplx> df(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Index n = split_.i1[k];
    const cplx denom = lambda(n) - z;
    f[k] = (nu(n) - z) / denom;
    df[k] = (nu(n) - lambda(n)) / (denom * denom);
  }
  cplx sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    cplx term = df[k];
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) term *= f[j];
    sum += term;
  }
  return sum;
}

ResidueMap residues(const ProductFunction& pf) {
  ResidueMap out;
  const double d = pf.spec().gap;
  const double cap = std::exp(pf.total_deviation() / d) * (1.0 + 1e-12);
  const std::vector<Index>& i1 = pf.i1();
  for (Index n : i1) {
    const double ln = pf.lambda(n);
    std::vector<Index> others;
    for (Index m : i1)
      if (m != n) others.push_back(m);
    std::stable_sort(others.begin(), others.end(), [&](Index a, Index b) {
      return std::abs(pf.lambda(a) - ln) < std::abs(pf.lambda(b) - ln);
    });
    cplx prod = 1.0;
    for (Index m : others) prod *= (pf.nu(m) - ln) / (pf.lambda(m) - ln);
    if (!(std::abs(prod) <= cap))
      fail(ErrorKind::SolverFailure, "residue product at index " + std::to_string(n) +
                                         " exceeds exp(sum |nu - lambda| / d)");
    out[n] = (pf.nu(n) - ln) * prod;
  }
  return out;
}

PerturbationCoefficients synthesize_coefficients(const BaseSpectrum& spec, const ResidueMap& c) {
  PerturbationCoefficients out;
  out.a.tail = PowerTail{1.0, 1.0, 0.0, 1.0, Parity::Even};
  out.b.tail = std::nullopt;
  if (c.empty()) return out;
  const Index lo = c.begin()->first;
  const Index hi = c.rbegin()->first;
  if (!spec.has_index(lo)) fail(ErrorKind::IndexMismatch, "residue at an index outside the index set");
  out.a.head_offset = lo;
  out.b.head_offset = lo;
  for (Index n = lo; n <= hi; ++n) {
    const auto it = c.find(n);
    if (it == c.end() || it->second == cplx(0.0)) {
      out.a.head.push_back(1.0 / (1.0 + static_cast<double>(radius_of(n))));
      out.b.head.push_back(0.0);
      continue;
    }
    const double r = std::sqrt(std::abs(it->second));
    out.a.head.push_back(r);
    // sqrt|c| e^{i arg c} with the principal branch, computed without trig.
    out.b.head.push_back(it->second / r);
  }
  return out;
}

PerturbationCoefficients synthesize_with_phi(const BaseSpectrum& spec, const ResidueMap& c,
                                             const CoefficientSequence& phi) {
  PerturbationCoefficients out;
  out.a = phi;
  out.b.tail = std::nullopt;
  Index lo = 0;
  Index hi = -1;
  bool any = false;
  const auto include = [&](Index n) {
    lo = any ? std::min(lo, n) : n;
    hi = any ? std::max(hi, n) : n;
    any = true;
  };
  if (!phi.head.empty()) {
    include(phi.head_offset);
    include(phi.head_offset + static_cast<Index>(phi.head.size()) - 1);
  }
  for (const auto& [n, cn] : c)
    if (cn != cplx(0.0)) include(n);
  if (!any) return out;
  if (!spec.has_index(lo)) fail(ErrorKind::IndexMismatch, "phi or residues at an index outside the index set");
  out.b.head_offset = lo;
  for (Index n = lo; n <= hi; ++n) {
    const cplx an = phi(n);
    const auto it = c.find(n);
    const cplx cn = it == c.end() ? cplx(0.0) : it->second;
    if (cn != cplx(0.0)) {
      if (an == cplx(0.0))
        fail(ErrorKind::ZeroCoefficientObstruction,
             "a_" + std::to_string(n) + " = 0 but c_" + std::to_string(n) + " != 0; b_n is undetermined");
      out.b.head.push_back(cn / std::conj(an));
    } else {
      // Any b_n works when a_n = 0 and c_n = 0; a nonzero one keeps the index non-degenerate.
      out.b.head.push_back(an == cplx(0.0) ? cplx(1.0 / (1.0 + static_cast<double>(radius_of(n))), 0.0)
                                           : cplx(0.0));
    }
  }
  return out;
}

std::vector<cplx> default_sample_points(const ProductFunction& pf, int count) {
  const double d = pf.spec().gap;
  double lo = pf.lambda(0);
  double hi = lo;
  for (Index n : pf.i1()) {
    lo = std::min(lo, pf.lambda(n));
    hi = std::max(hi, pf.lambda(n));
  }
  lo -= d;
  hi += d;
  std::vector<cplx> out;
  const int grid = std::max(count - 1, 1);
  for (int j = 0; j < grid; ++j) {
    const double x = lo + (hi - lo) * (j + 0.5) / grid;
    const double y = 0.25 * d * (1 + j % 4) * (j % 2 == 0 ? 1.0 : -1.0);
    out.emplace_back(x, y);
  }
  if (count > 1) out.emplace_back(0.0, 1e3);
  return out;
}

DiscrepancyReport check_F_equals_product(const PerturbationCoefficients& coeffs, const ProductFunction& pf,
                                         const std::vector<cplx>& samples) {
  const ValidatedCoefficients v = validate_coefficients(coeffs, pf.spec());
  const CharacteristicFunction cf(pf.spec(), v, 0);
  if (!v.tail.zero) fail(ErrorKind::InvalidArgument, "F = F~ check needs finitely many nonzero c_n");
  const double rel = kUnitRoundoff * (4.0 * static_cast<double>(pf.i1().size()) + 16.0);
  DiscrepancyReport report;
  for (cplx z : samples) {
    const Evaluation f = cf.eval(z);
    const Evaluation p = pf.eval_with_bound(z);
    double propagated = 0.0;
    for (const Pole& pole : cf.poles()) propagated += rel * std::abs(pole.c) / std::abs(pole.lambda - z);
    const double bound = f.error_bound + p.error_bound + propagated;
    const double disc = std::abs(f.value - p.value);
    report.max_discrepancy = std::max(report.max_discrepancy, disc);
    if (disc > 0.0) report.max_ratio = std::max(report.max_ratio, bound > 0.0 ? disc / bound : std::numeric_limits<double>::infinity());
    if (disc > bound) report.within_bounds = false;
  }
  return report;
}

PerturbationCoefficients solve_inverse(const BaseSpectrum& spec, const TargetSpectrum& target) {
  const ProductFunction pf(spec, target);
  return synthesize_coefficients(pf.spec(), residues(pf));
}

InverseResult solve_inverse_certified(const BaseSpectrum& spec, const TargetSpectrum& target,
                                      const std::optional<CoefficientSequence>& phi) {
  const ProductFunction pf(spec, target);
  InverseResult out;
  out.residues = residues(pf);
  out.coefficients = phi ? synthesize_with_phi(pf.spec(), out.residues, *phi)
                         : synthesize_coefficients(pf.spec(), out.residues);
  out.check = check_F_equals_product(out.coefficients, pf, default_sample_points(pf));
  return out;
}

}  // namespace rank1
