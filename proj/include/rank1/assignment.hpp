#pragma once

#include <vector>

namespace rank1 {

// Minimum-cost perfect matching on a square cost matrix (row-major, n x n).
// Returns column assigned to each row. Deterministic for identical input.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n);

}  // namespace rank1
