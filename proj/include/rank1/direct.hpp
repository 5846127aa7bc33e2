#pragma once

// Direct problem: eigenvalues of A + <., phi> psi from the spectral data.

#include <optional>
#include <vector>

#include "rank1/charfn.hpp"
#include "rank1/contour.hpp"

namespace rank1 {

struct DirectOptions {
  std::optional<double> eps;             // localization parameter; default d / (2 + d)
  std::optional<Index> central_radius;   // overrides K'_eps (required for non-summable data)
  std::optional<Index> window;           // report radius; default max(coefficient extent, K'_eps)
  Index truncation = 2000;               // explicit summation radius of F
  int quadrature_points = 256;
  int max_quadrature_points = 4096;
  double tol = 1e-10;
  double cluster_tol = 1e-6;             // relative to d
  int max_truncation_doublings = 2;
  int threads = 0;                       // 0: RANK1_THREADS or hardware concurrency
  bool allow_nonsummable = false;
};

struct LocatedZero {
  cplx location;
  int order = 1;
  double residual = 0.0;
};

enum class RegionKind { Central, Disk };

struct ZeroReport {
  RegionKind kind = RegionKind::Central;
  Index index = 0;  // disk index k; unused for the central rectangle
  Region region;
  WindingResult winding;
  std::vector<LocatedZero> zeros;

  int zero_count() const noexcept { return winding.zeros(); }
};

struct Localization {
  double eps = 0.0;
  Index k_eps = 0;
  Index k_eps_prime = 0;
  Index window = 0;
  Index truncation = 0;
  RectRegion central;
  std::vector<ZeroReport> reports;  // central rectangle first, then disks by index
  bool certified = false;

  const ZeroReport& central_report() const { return reports.front(); }
};

// Central rectangle and disks R_k = D(lambda_k, d/2) for K' < |k| <= window,
// with every zero located and refined. Retries with a doubled truncation
// radius when a contour cannot be certified.
Localization localize_spectrum(const BaseSpectrum& spec, const ValidatedCoefficients& coeffs,
                               const DirectOptions& options = {});

// Same, on a prepared characteristic function (no truncation retries).
Localization localize_spectrum(const CharacteristicFunction& cf, const DirectOptions& options = {});

// Pairs zeros with indices and adds the points of sigma_0.
PerturbedSpectrum assemble_spectrum(const CharacteristicFunction& cf, const Localization& loc,
                                    const DirectOptions& options = {});

struct DirectResult {
  PerturbedSpectrum spectrum;
  Localization localization;
};

DirectResult solve_direct(const BaseSpectrum& spec, const PerturbationCoefficients& coeffs,
                          const DirectOptions& options = {});

// Number of worker threads implied by the options and RANK1_THREADS.
int worker_threads(const DirectOptions& options);

}  // namespace rank1
