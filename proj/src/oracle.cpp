#include "rank1/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

#include "rank1/assignment.hpp"
#include "rank1/error.hpp"

namespace rank1 {

namespace {

constexpr Index kMaxRadius = Index{1} << 20;

void sort_spectrum(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx x, cplx y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
}

}  // namespace

TruncatedOperator build_truncation(const BaseSpectrum& spec, const PerturbationCoefficients& coeffs, Index radius) {
  if (radius < 0 || radius > kMaxRadius)
    fail(ErrorKind::WindowExceeded, "truncation radius " + std::to_string(radius) + " outside [0, 2^20]");
  TruncatedOperator op;
  op.window = window(spec.index_set, radius);
  const auto n = static_cast<Eigen::Index>(op.window.size());
  Eigen::VectorXcd a(n);
  Eigen::VectorXcd b(n);
  Eigen::VectorXcd lambda(n);
  op.expected_trace = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Index idx = op.window.lo + j;
    a(j) = coeffs.a(idx);
    b(j) = coeffs.b(idx);
    lambda(j) = spec.lambda(idx);
    op.expected_trace += lambda(j) + std::conj(a(j)) * b(j);
  }
  op.matrix = b * a.adjoint();
  op.matrix.diagonal() += lambda;
  return op;
}

std::vector<cplx> dense_eigenvalues(const TruncatedOperator& op, std::size_t cap) {
  const auto n = static_cast<std::size_t>(op.matrix.rows());
  if (n > cap)
    fail(ErrorKind::DimensionCap, "dimension " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (n == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op.matrix, false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::SolverFailure, "dense eigensolver did not converge");
  std::vector<cplx> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  sort_spectrum(out);
  return out;
}

std::vector<cplx> companion_eigenvalues(const TruncatedOperator& op) {
  const Eigen::Index n = op.matrix.rows();
  if (n > 8) fail(ErrorKind::DimensionCap, "companion fallback is limited to dimension 8");
  if (n == 0) return {};
  // Faddeev-LeVerrier: p(z) = z^n + c_{n-1} z^{n-1} + ... + c_0.
  const Eigen::MatrixXcd& a = op.matrix;
  std::vector<cplx> coef(static_cast<std::size_t>(n) + 1);
  coef[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + coef[static_cast<std::size_t>(n - k + 1)] * id;
    coef[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -coef[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::SolverFailure, "companion eigensolver did not converge");
  std::vector<cplx> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  sort_spectrum(out);
  return out;
}

double trace_check(const TruncatedOperator& op, const std::vector<cplx>& eigenvalues) {
  cplx sum = 0.0;
  for (cplx z : eigenvalues) sum += z;
  return std::abs(sum - op.expected_trace);
}

ComparisonReport compare_spectra(const std::vector<cplx>& computed, const std::vector<cplx>& reference, double tol) {
  if (computed.size() != reference.size())
    fail(ErrorKind::CardinalityMismatch, "computed spectrum has " + std::to_string(computed.size()) +
                                             " entries, reference has " + std::to_string(reference.size()));
  const int n = static_cast<int>(computed.size());
  std::vector<double> cost(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cost[static_cast<std::size_t>(i) * n + j] =
          std::abs(computed[static_cast<std::size_t>(i)] - reference[static_cast<std::size_t>(j)]);
  ComparisonReport report;
  report.matching = min_cost_assignment(cost, n);
  for (int i = 0; i < n; ++i)
    report.max_distance = std::max(report.max_distance,
                                   cost[static_cast<std::size_t>(i) * n + report.matching[static_cast<std::size_t>(i)]]);
  report.pass = report.max_distance < tol;
  return report;
}

ComparisonReport compare_spectra(const PerturbedSpectrum& computed, const std::vector<cplx>& reference, double tol) {
  std::vector<cplx> values;
  values.reserve(computed.entries.size());
  for (const SpectrumEntry& e : computed.entries) values.push_back(e.mu);
  return compare_spectra(values, reference, tol);
}

}  // namespace rank1
