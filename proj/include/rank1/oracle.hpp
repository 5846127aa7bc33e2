#pragma once

// Dense truncations of B for verification, independent of the
// characteristic-function code paths.

#include <Eigen/Dense>
#include <vector>

#include "rank1/spectral_model.hpp"

namespace rank1 {

struct TruncatedOperator {
  Window window;
  Eigen::MatrixXcd matrix;  // lambda_j delta_jk + b_j conj(a_k), indices in increasing order
  cplx expected_trace;      // sum lambda_n + sum c_n over the window
};

constexpr std::size_t kDefaultDimensionCap = 1000;

TruncatedOperator build_truncation(const BaseSpectrum& spec, const PerturbationCoefficients& coeffs, Index radius);

// Eigenvalues sorted by real part, then imaginary part.
std::vector<cplx> dense_eigenvalues(const TruncatedOperator& op, std::size_t cap = kDefaultDimensionCap);

// Roots of the characteristic polynomial (Faddeev-LeVerrier) through its
// companion matrix; only for dimension <= 8.
std::vector<cplx> companion_eigenvalues(const TruncatedOperator& op);

// |sum of eigenvalues - expected trace|
double trace_check(const TruncatedOperator& op, const std::vector<cplx>& eigenvalues);

struct ComparisonReport {
  double max_distance = 0.0;
  bool pass = false;
  std::vector<int> matching;  // computed position -> reference position
};

ComparisonReport compare_spectra(const std::vector<cplx>& computed, const std::vector<cplx>& reference, double tol);
ComparisonReport compare_spectra(const PerturbedSpectrum& computed, const std::vector<cplx>& reference, double tol);

}  // namespace rank1
