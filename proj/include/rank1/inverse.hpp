#pragma once

// Inverse problem: coefficients whose perturbation has a prescribed spectrum.

#include <map>
#include <optional>
#include <vector>

#include "rank1/charfn.hpp"

namespace rank1 {

struct TargetSplit {
  TargetSpectrum normalized;  // values equal to some lambda_n moved to position n
  std::vector<Index> i0;      // head positions with nu_n == lambda_n
  std::vector<Index> i1;      // head positions with nu_n != lambda_n
};

// Repeated values encode multiplicity and stay in order of appearance.
TargetSplit split_target(const BaseSpectrum& spec, const TargetSpectrum& target);

// F~(z) = prod_{n in I1} (nu_n - z) / (lambda_n - z), a finite product.
class ProductFunction {
 public:
  ProductFunction(BaseSpectrum spec, const TargetSpectrum& target);

  cplx eval(cplx z) const;
  // Value and a bound on its floating-point error.
  Evaluation eval_with_bound(cplx z) const;
  cplx derivative(cplx z) const;

  const BaseSpectrum& spec() const noexcept { return spec_; }
  const TargetSplit& split() const noexcept { return split_; }
  const std::vector<Index>& i1() const noexcept { return split_.i1; }
  cplx nu(Index n) const noexcept { return split_.normalized.nu(n, spec_); }
  double lambda(Index n) const noexcept { return spec_.lambda(n); }
  // sum over I1 of |nu_n - lambda_n|
  double total_deviation() const noexcept;

 private:
  void check_pole(cplx z) const;

  BaseSpectrum spec_;
  TargetSplit split_;
};

using ResidueMap = std::map<Index, cplx>;

// c_n = (nu_n - lambda_n) prod_{m != n} (nu_m - lambda_n) / (lambda_m - lambda_n),
// factors multiplied in increasing order of |lambda_m - lambda_n|.
ResidueMap residues(const ProductFunction& pf);

// a_n = sqrt|c_n|, b_n = sqrt|c_n| e^{i arg c_n} on I1; a_n = 1/(1+|n|), b_n = 0 elsewhere.
PerturbationCoefficients synthesize_coefficients(const BaseSpectrum& spec, const ResidueMap& c);

// Fixed phi: b_n = c_n / conj(a_n). Throws ZeroCoefficientObstruction when
// a_n = 0 for some n with c_n != 0.
PerturbationCoefficients synthesize_with_phi(const BaseSpectrum& spec, const ResidueMap& c,
                                             const CoefficientSequence& phi);

struct DiscrepancyReport {
  double max_discrepancy = 0.0;  // max |F - F~| over the samples
  double max_ratio = 0.0;        // max |F - F~| / combined error bound
  bool within_bounds = true;
};

std::vector<cplx> default_sample_points(const ProductFunction& pf, int count = 25);

DiscrepancyReport check_F_equals_product(const PerturbationCoefficients& coeffs, const ProductFunction& pf,
                                         const std::vector<cplx>& samples);

struct InverseResult {
  PerturbationCoefficients coefficients;
  ResidueMap residues;
  DiscrepancyReport check;
};

PerturbationCoefficients solve_inverse(const BaseSpectrum& spec, const TargetSpectrum& target);

// Full pipeline with the F = F~ check on default sample points.
InverseResult solve_inverse_certified(const BaseSpectrum& spec, const TargetSpectrum& target,
                                      const std::optional<CoefficientSequence>& phi = std::nullopt);

}  // namespace rank1
