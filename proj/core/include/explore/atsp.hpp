#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace explore {

// Row-major asymmetric cost matrix. Unreachable entries are +inf.
struct CostMatrix {
  int n = 0;
  std::vector<double> c;

  explicit CostMatrix(int size = 0) : n(size), c(static_cast<std::size_t>(size) * size, 0.0) {}
  double& at(int i, int j) { return c[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return c[static_cast<std::size_t>(i) * n + j]; }
};

struct TourResult {
  std::vector<int> order;  // starts at node 0
  double cost = 0.0;       // open-path cost: edges along the order, no return
};

double tour_cost(const CostMatrix& m, const std::vector<int>& order);

// Exact open-loop ATSP from node 0 by Held-Karp over subsets. Column 0 is
// ignored (returning to the start is free), which makes the closed tour and
// the open path equivalent. n - 1 <= 24.
TourResult solve_atsp_exact(const CostMatrix& m);

// Deterministic nearest-neighbor multistart with or-opt segment relocation,
// node swaps, and double-bridge perturbations.
TourResult solve_atsp_heuristic(const CostMatrix& m);

// Exact below the threshold, heuristic above.
TourResult solve_atsp(const CostMatrix& m, int exact_threshold = 13);

// TSPLIB explicit full-matrix dump (costs scaled to integers) for
// cross-checking against external solvers.
void write_tsplib_atsp(std::ostream& os, const CostMatrix& m, const std::string& name);

}  // namespace explore
