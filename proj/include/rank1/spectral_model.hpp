#pragma once

// Core data shared by the direct and inverse solvers.
//
// Infinite sequences are stored as an explicit head array over a window of
// indices plus a parametric tail generator: affine for the unperturbed
// eigenvalues, power law with phase (or zero) for the Fourier coefficients,
// and "equals lambda" for target spectra.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace rank1 {

using cplx = std::complex<double>;
using Index = std::int64_t;

enum class IndexSet { Integers, Naturals };

// Principal-value window: -radius..radius over Z, 0..radius over N.
struct Window {
  Index lo = 0;
  Index hi = -1;

  bool contains(Index n) const noexcept { return n >= lo && n <= hi; }
  std::size_t size() const noexcept { return hi < lo ? 0 : static_cast<std::size_t>(hi - lo + 1); }
};

Window window(IndexSet set, Index radius) noexcept;

// |n| for Z, n for N; the radius of the smallest window containing n.
inline Index radius_of(Index n) noexcept { return n < 0 ? -n : n; }

struct AffineTail {
  double slope = 1.0;
  double intercept = 0.0;

  bool operator==(const AffineTail&) const = default;
};

struct BaseSpectrum {
  IndexSet index_set = IndexSet::Integers;
  Index head_offset = 0;
  std::vector<double> head;  // lambda_n for n in [head_offset, head_offset + head.size())
  AffineTail tail;           // lambda_n = slope * n + intercept elsewhere
  double gap = 1.0;          // declared separation d

  // Set by validate_base: infimum of consecutive gaps over head and tail.
  std::optional<double> certified_gap;

  double lambda(Index n) const noexcept;
  bool in_head(Index n) const noexcept {
    return n >= head_offset && n < head_offset + static_cast<Index>(head.size());
  }
  bool has_index(Index n) const noexcept { return index_set == IndexSet::Integers || n >= 0; }

  bool operator==(const BaseSpectrum&) const = default;
};

enum class Parity { Even, Odd };

// scale * (|n| + shift)^(-beta) * exp(i phase), negated for n < 0 when odd.
// The generator vanishes where |n| + shift == 0.
struct PowerTail {
  double beta = 1.0;
  double scale = 1.0;
  double phase = 0.0;
  double shift = 0.0;
  Parity parity = Parity::Even;

  cplx operator()(Index n) const noexcept;
  bool operator==(const PowerTail&) const = default;
};

struct CoefficientSequence {
  Index head_offset = 0;
  std::vector<cplx> head;
  std::optional<PowerTail> tail;  // nullopt: zero tail

  cplx operator()(Index n) const noexcept;
  bool in_head(Index n) const noexcept {
    return n >= head_offset && n < head_offset + static_cast<Index>(head.size());
  }
  bool operator==(const CoefficientSequence&) const = default;
};

struct PerturbationCoefficients {
  CoefficientSequence a;  // Fourier coefficients of phi
  CoefficientSequence b;  // Fourier coefficients of psi

  // c_n = conj(a_n) b_n, the residue of -F at lambda_n.
  cplx c(Index n) const noexcept { return std::conj(a(n)) * b(n); }
  bool operator==(const PerturbationCoefficients&) const = default;
};

// Model of c_n beyond the explicit window |n| > extent. When both tails are
// power laws with equal shifts the model is exact:
//   c_n = pos * (n + shift)^(-gamma)   for n > extent,
//   c_n = neg * (|n| + shift)^(-gamma) for n < -extent.
// Otherwise magnitudes are an upper bound and `exact` is false.
struct CoefficientTail {
  bool zero = true;
  bool exact = true;
  cplx pos{0.0, 0.0};
  cplx neg{0.0, 0.0};
  double gamma = 0.0;
  double shift = 0.0;

  // Sum of |c_n| over the generator region |n| > n_min (n_min >= extent).
  double abs_sum_beyond(IndexSet set, Index n_min) const;
};

struct ValidatedCoefficients {
  PerturbationCoefficients coeffs;
  IndexSet index_set = IndexSet::Integers;
  Index extent = 0;          // all explicit head entries satisfy |n| <= extent
  std::vector<Index> i0;     // n in window(extent) with c_n == 0
  std::vector<Index> i1;     // n in window(extent) with c_n != 0
  CoefficientTail tail;

  // T(N) = sum_{|n| > N} |c_n|; +inf when the tail is not summable.
  double tail_sum(Index n) const;
  double total_abs() const { return tail_sum(-1); }
};

struct ValidationOptions {
  // Accept tails that are not square summable; used to reproduce the
  // non-summable counterexample.
  bool allow_nonsummable = false;
};

// Raises GapViolation, NonMonotone or NonReal.
BaseSpectrum validate_base(BaseSpectrum spec);

// Raises IndexMismatch, NonSummable or DegenerateIndex.
ValidatedCoefficients validate_coefficients(const PerturbationCoefficients& coeffs,
                                            const BaseSpectrum& spec,
                                            ValidationOptions options = {});

struct TargetSpectrum {
  Index head_offset = 0;
  std::vector<cplx> head;  // nu_n on the head; nu_n = lambda_n elsewhere

  bool in_head(Index n) const noexcept {
    return n >= head_offset && n < head_offset + static_cast<Index>(head.size());
  }
  cplx nu(Index n, const BaseSpectrum& spec) const noexcept {
    return in_head(n) ? head[static_cast<std::size_t>(n - head_offset)] : cplx(spec.lambda(n), 0.0);
  }
  bool operator==(const TargetSpectrum&) const = default;
};

// Raises IndexMismatch or NonReal (non-finite entries).
TargetSpectrum validate_target(const TargetSpectrum& target, const BaseSpectrum& spec);

enum class Origin { CommonWithA, ZeroOfF, Both };

// One entry per represented index: an eigenvalue of algebraic multiplicity m
// appears m times with distinct paired indices.
struct SpectrumEntry {
  cplx mu;
  int multiplicity = 1;
  Index paired_index = 0;
  Origin origin = Origin::ZeroOfF;
  double offset = 0.0;  // |mu - lambda_{paired_index}|

  bool operator==(const SpectrumEntry&) const = default;
};

struct PerturbedSpectrum {
  std::vector<SpectrumEntry> entries;  // sorted by paired_index
  double offset_sum = 0.0;
  double tail_bound = 0.0;  // bound on the offsets beyond the window; +inf if none is available
  bool certified = false;

  // Partial sums of offsets over windows |n| <= r for r = 0, 1, ..., max radius.
  std::vector<double> offset_partial_sums() const;
  const SpectrumEntry* find(Index paired_index) const noexcept;
};

}  // namespace rank1
