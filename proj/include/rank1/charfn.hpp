#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rank1/spectral_model.hpp"

namespace rank1 {

struct Evaluation {
  cplx value;
  double error_bound = 0.0;  // truncation remainder plus a floating-point rounding bound
};

struct Pole {
  Index index;
  double lambda;
  cplx c;
  double abs_c;
};

// F(z) = 1 + sum_{n in I1} c_n / (lambda_n - z), summed explicitly over the
// window |n| <= explicit_radius() and completed beyond it either by a
// convergent series in z built from Hurwitz zeta moments of the power-law
// tail, or, when that series is unavailable, by the bound T(N) / delta.
class CharacteristicFunction {
 public:
  static constexpr Index kDefaultTruncation = 2000;

  CharacteristicFunction(BaseSpectrum spec, ValidatedCoefficients coeffs,
                         Index truncation = kDefaultTruncation);

  Evaluation eval(cplx z) const;
  Evaluation derivative(cplx z, int order) const;
  // F(z) and F'(z) from a single pass over the poles.
  std::pair<Evaluation, Evaluation> eval_with_derivative(cplx z) const;

  // 1 + c_k / (lambda_k - z); its only zero is lambda_k + c_k.
  cplx eval_G(Index k, cplx z) const;
  // Partial sum over |n| <= k; exact, no tail.
  cplx eval_H(Index k, cplx z) const;

  // Smallest K with T(K) < eps, and smallest K' > K with
  // sum_{|n|<=K} |c_n| / ((K' - K) d) < eps.
  std::pair<Index, Index> compute_keps(double eps) const;

  double tail_sum(Index n) const { return coeffs_.tail_sum(n); }
  double gap() const noexcept { return spec_.gap; }
  double lambda(Index n) const noexcept { return spec_.lambda(n); }
  cplx c(Index n) const noexcept { return coeffs_.coeffs.c(n); }
  bool in_i1(Index n) const noexcept { return spec_.has_index(n) && c(n) != cplx(0.0); }

  const BaseSpectrum& spec() const noexcept { return spec_; }
  const ValidatedCoefficients& coefficients() const noexcept { return coeffs_; }
  Index truncation() const noexcept { return truncation_; }
  Index explicit_radius() const noexcept { return explicit_radius_; }

  // Poles of the explicit window in increasing order of lambda.
  std::span<const Pole> poles() const noexcept { return poles_; }
  std::span<const Pole> poles_between(double x0, double x1) const noexcept;
  // Number of poles (explicit and tail) with lambda strictly inside (x0, x1).
  Index count_poles_between(double x0, double x1) const;
  double distance_to_nearest_pole(cplx z) const;
  bool near_pole(cplx z) const;

 private:
  struct TailSeries {
    bool active = false;
    bool two_sided = false;
    double slope = 1.0;
    double center_pos = 0.0;  // lambda_n = slope * (n + shift) + center_pos for n > N
    double center_neg = 0.0;  // lambda_n = -slope * (|n| + shift) + center_neg for n < -N
    double q = 1.0;
    double zeta1 = 0.0;
    cplx pos, neg;
    std::vector<double> moments;  // zeta(gamma + k + 1, q) / slope^(k + 1)
  };

  Evaluation eval_order(cplx z, int order) const;
  // Tail contribution to the order-th derivative; false if the series is unusable at z.
  bool tail_series(cplx z, int order, cplx& value, double& bound) const;
  double tail_fallback_bound(cplx z, int order) const;
  double distance_to_tail_pole(cplx z) const;
  void check_pole(cplx z) const;

  BaseSpectrum spec_;
  ValidatedCoefficients coeffs_;
  Index truncation_;
  Index explicit_radius_;
  std::vector<Pole> poles_;           // by lambda
  std::vector<Pole> summation_order_; // largest |n| first
  TailSeries series_;
  double tail_total_;                 // T(explicit_radius)
};

}  // namespace rank1
