#pragma once

namespace rank1::detail {

// Hurwitz zeta sum_{k>=0} (k + q)^(-s); +inf for s <= 1, 0 on underflow.
double hurwitz_zeta(double s, double q);

}  // namespace rank1::detail
