#pragma once

// Built-in instances over the spectrum of the periodic derivative operator.

#include <string>
#include <vector>

#include "rank1/direct.hpp"

namespace rank1::gallery {

// lambda_n = n over Z, d = 1.
BaseSpectrum example_periodic_base();

// c_n = 1/n (n != 0), c_0 = 0. Not square summable: direct runs need the
// validation bypass and an explicit central radius.
PerturbationCoefficients example_51();
cplx example_51_closed_form(cplx z);  // (z^2 + 1)/z^2 - (pi/z) cot(pi z)
DirectOptions example_51_options(Index window);

// a_n = b_n = |n|^(-beta), so c_n = |n|^(-2 beta); a_0 = 1, b_0 = 0.
PerturbationCoefficients example_52(double beta);
double example_52_residue_exponent(double beta);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<Check> report_periodic();
std::vector<Check> report_51(Index window);
std::vector<Check> report_52(double beta, Index window);

// Least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rank1::gallery
