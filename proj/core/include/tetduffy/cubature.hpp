#pragma once

#include <vector>

#include "tetduffy/reduction.hpp"

namespace tetduffy {

inline constexpr int kMaxCCPoints = 129;

// Clenshaw-Curtis rule on [0,1]: nodes at mapped Chebyshev extrema,
// weights from the exact cosine-sum formula.  The (2m+1)-point rule nests
// the (m+1)-point rule's nodes.
struct CCRule {
  int n_points = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Throws Error unless 2 <= n <= kMaxCCPoints.
CCRule cc_rule(int n);

// Tensor-product cubature of the reduced integrand with n points per
// dimension (n^y_dim samples).  Deterministic: the grid is partitioned into
// chunks fixed independently of the thread count and per-chunk partial sums
// are combined in chunk order.  n_threads = 0 selects hardware concurrency.
Complex tensor_integrate(const ReducedIntegrand& ri, int n, int n_threads = 0);

struct SweepRow {
  int n = 0;
  long long total_samples = 0;
  Complex value{};
  double rel_delta_to_max_n = 0.0;
};

// Evaluates the integral at each n and reports each value's relative
// deviation from the largest-n value.
std::vector<SweepRow> converge_sweep(const ReducedIntegrand& ri,
                                     const std::vector<int>& n_list,
                                     int n_threads = 0);

}  // namespace tetduffy
