#include "rank1/spectral_model.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rank1/error.hpp"
#include "special.hpp"

namespace rank1 {

namespace detail {

double hurwitz_zeta(double s, double q) {
  if (s <= 1.0) return std::numeric_limits<double>::infinity();
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  gsl_sf_result result;
  const int status = gsl_sf_hzeta_e(s, q, &result);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != GSL_SUCCESS) fail(ErrorKind::SolverFailure, "Hurwitz zeta failed for s=" + std::to_string(s));
  return result.val;
}

}  // namespace detail

namespace {

constexpr double kGapSlack = 1e-12;

bool finite(double x) { return std::isfinite(x); }
bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_tail(const std::optional<PowerTail>& tail, const char* name) {
  if (!tail) return;
  if (!finite(tail->beta) || !finite(tail->scale) || !finite(tail->phase) || !finite(tail->shift))
    fail(ErrorKind::NonReal, std::string(name) + " tail has non-finite parameters");
  if (tail->shift < 0.0) fail(ErrorKind::InvalidArgument, std::string(name) + " tail shift must be >= 0");
}

bool square_summable(const std::optional<PowerTail>& tail) {
  return !tail || tail->scale == 0.0 || tail->beta > 0.5;
}

CoefficientTail tail_model(const CoefficientSequence& a, const CoefficientSequence& b) {
  CoefficientTail t;
  if (!a.tail || !b.tail || a.tail->scale == 0.0 || b.tail->scale == 0.0) return t;
  const PowerTail& ta = *a.tail;
  const PowerTail& tb = *b.tail;
  t.zero = false;
  t.gamma = ta.beta + tb.beta;
  const cplx ua = std::polar(ta.scale, ta.phase);
  const cplx ub = std::polar(tb.scale, tb.phase);
  const double sa = ta.parity == Parity::Odd ? -1.0 : 1.0;
  const double sb = tb.parity == Parity::Odd ? -1.0 : 1.0;
  t.pos = std::conj(ua) * ub;
  t.neg = std::conj(ua * sa) * (ub * sb);
  t.exact = ta.shift == tb.shift;
  t.shift = std::min(ta.shift, tb.shift);
  return t;
}

Index head_radius(Index offset, std::size_t size) {
  if (size == 0) return 0;
  const Index last = offset + static_cast<Index>(size) - 1;
  return std::max(radius_of(offset), radius_of(last));
}

}  // namespace

Window window(IndexSet set, Index radius) noexcept {
  if (radius < 0) return {};
  if (set == IndexSet::Naturals) return {0, radius};
  return {-radius, radius};
}

double BaseSpectrum::lambda(Index n) const noexcept {
  if (in_head(n)) return head[static_cast<std::size_t>(n - head_offset)];
  return tail.slope * static_cast<double>(n) + tail.intercept;
}

cplx PowerTail::operator()(Index n) const noexcept {
  const double base = static_cast<double>(radius_of(n)) + shift;
  if (base == 0.0 || scale == 0.0) return {0.0, 0.0};
  double mag = scale * std::pow(base, -beta);
  if (parity == Parity::Odd && n < 0) mag = -mag;
  return std::polar(1.0, phase) * mag;
}

cplx CoefficientSequence::operator()(Index n) const noexcept {
  if (in_head(n)) return head[static_cast<std::size_t>(n - head_offset)];
  if (tail) return (*tail)(n);
  return {0.0, 0.0};
}

double CoefficientTail::abs_sum_beyond(IndexSet set, Index n_min) const {
  if (zero) return 0.0;
  const double q = static_cast<double>(std::max<Index>(n_min, 0) + 1) + shift;
  const double z = detail::hurwitz_zeta(gamma, q);
  if (std::isinf(z)) return std::numeric_limits<double>::infinity();
  double sum = std::abs(pos) * z;
  if (set == IndexSet::Integers) sum += std::abs(neg) * z;
  return sum;
}

double ValidatedCoefficients::tail_sum(Index n) const {
  double sum = tail.abs_sum_beyond(index_set, extent);
  if (n >= extent) return n == extent ? sum : tail.abs_sum_beyond(index_set, n);
  if (std::isinf(sum)) return sum;
  const Window w = window(index_set, extent);
  double explicit_part = 0.0;
  // Inward accumulation, largest radius first.
  for (Index r = extent; r > n && r >= 0; --r) {
    if (w.contains(r)) explicit_part += std::abs(coeffs.c(r));
    if (r != 0 && w.contains(-r)) explicit_part += std::abs(coeffs.c(-r));
  }
  return sum + explicit_part;
}

BaseSpectrum validate_base(BaseSpectrum spec) {
  if (!finite(spec.gap) || !finite(spec.tail.slope) || !finite(spec.tail.intercept))
    fail(ErrorKind::NonReal, "gap and tail parameters must be finite reals");
  for (double v : spec.head)
    if (!finite(v)) fail(ErrorKind::NonReal, "eigenvalue head contains a non-finite value");
  if (spec.gap <= 0.0) fail(ErrorKind::GapViolation, "declared gap must be positive");
  if (spec.index_set == IndexSet::Naturals && spec.head_offset < 0)
    fail(ErrorKind::IndexMismatch, "head offset is negative for index set N");
  if (spec.tail.slope <= 0.0) fail(ErrorKind::NonMonotone, "tail slope must be positive");
  if (spec.tail.slope < spec.gap * (1.0 - kGapSlack))
    fail(ErrorKind::GapViolation, "tail slope " + std::to_string(spec.tail.slope) + " is below the declared gap");

  double min_gap = spec.tail.slope;
  if (!spec.head.empty()) {
    Index first = spec.head_offset - 1;
    if (!spec.has_index(first)) first = spec.head_offset;
    const Index last = spec.head_offset + static_cast<Index>(spec.head.size());
    for (Index n = first; n < last; ++n) {
      const double lo = spec.lambda(n);
      const double hi = spec.lambda(n + 1);
      const double diff = hi - lo;
      if (diff <= 0.0)
        fail(ErrorKind::NonMonotone, "eigenvalues not increasing at index " + std::to_string(n));
      if (diff < spec.gap * (1.0 - kGapSlack))
        fail(ErrorKind::GapViolation, "eigenvalues at indices " + std::to_string(n) + " and " +
                                          std::to_string(n + 1) + " are closer than the declared gap");
      min_gap = std::min(min_gap, diff);
    }
  }
  spec.certified_gap = min_gap;
  return spec;
}

ValidatedCoefficients validate_coefficients(const PerturbationCoefficients& coeffs, const BaseSpectrum& spec,
                                            ValidationOptions options) {
  const CoefficientSequence* seqs[] = {&coeffs.a, &coeffs.b};
  const char* names[] = {"a", "b"};
  for (int i = 0; i < 2; ++i) {
    const CoefficientSequence& s = *seqs[i];
    if (spec.index_set == IndexSet::Naturals && !s.head.empty() && s.head_offset < 0)
      fail(ErrorKind::IndexMismatch, std::string(names[i]) + " head starts at a negative index for index set N");
    for (const cplx& v : s.head)
      if (!finite(v)) fail(ErrorKind::NonReal, std::string(names[i]) + " head contains a non-finite value");
    check_tail(s.tail, names[i]);
    if (!options.allow_nonsummable && !square_summable(s.tail))
      fail(ErrorKind::NonSummable, std::string(names[i]) + " tail exponent must exceed 1/2 for square summability");
  }

  ValidatedCoefficients v;
  v.coeffs = coeffs;
  v.index_set = spec.index_set;
  v.extent = std::max(head_radius(coeffs.a.head_offset, coeffs.a.head.size()),
                      head_radius(coeffs.b.head_offset, coeffs.b.head.size()));
  v.tail = tail_model(coeffs.a, coeffs.b);

  const Window w = window(spec.index_set, v.extent);
  for (Index n = w.lo; n <= w.hi; ++n) {
    const bool explicit_entry = coeffs.a.in_head(n) || coeffs.b.in_head(n);
    const cplx an = coeffs.a(n);
    const cplx bn = coeffs.b(n);
    if (explicit_entry && an == cplx(0.0) && bn == cplx(0.0))
      fail(ErrorKind::DegenerateIndex, "a_n = b_n = 0 at index " + std::to_string(n));
    if (std::conj(an) * bn == cplx(0.0))
      v.i0.push_back(n);
    else
      v.i1.push_back(n);
  }
  return v;
}

TargetSpectrum validate_target(const TargetSpectrum& target, const BaseSpectrum& spec) {
  if (spec.index_set == IndexSet::Naturals && !target.head.empty() && target.head_offset < 0)
    fail(ErrorKind::IndexMismatch, "target head starts at a negative index for index set N");
  for (const cplx& v : target.head)
    if (!finite(v)) fail(ErrorKind::NonReal, "target contains a non-finite value");
  return target;
}

std::vector<double> PerturbedSpectrum::offset_partial_sums() const {
  Index max_r = -1;
  for (const auto& e : entries) max_r = std::max(max_r, radius_of(e.paired_index));
  std::vector<double> by_radius(static_cast<std::size_t>(max_r + 1), 0.0);
  for (const auto& e : entries) by_radius[static_cast<std::size_t>(radius_of(e.paired_index))] += e.offset;
  double acc = 0.0;
  for (double& x : by_radius) {
    acc += x;
    x = acc;
  }
  return by_radius;
}

const SpectrumEntry* PerturbedSpectrum::find(Index paired_index) const noexcept {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const SpectrumEntry& e) { return e.paired_index == paired_index; });
  return it == entries.end() ? nullptr : &*it;
}

}  // namespace rank1
