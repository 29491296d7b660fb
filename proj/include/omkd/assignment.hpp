#pragma once

#include <optional>
#include <vector>

namespace omkd::flow {

/// Result of a maximum-value b-matching: requests on one side with unit
/// capacity, resources on the other with capacity cap[k]. `u` and `h`
/// are optimal duals of the LP relaxation
///   max sum r x   s.t.  sum_k x_nk <= 1, sum_n x_nk <= cap_k, x >= 0,
/// satisfying complementary slackness and strong duality exactly up to
/// floating-point summation.
struct AssignmentResult {
  std::vector<int> match;  // per request: resource index or -1
  std::vector<double> u;   // per request
  std::vector<double> h;   // per resource
  double value = 0.0;      // total reward of matched edges
};

/// Successive-shortest-path min-cost flow over the bipartite network;
/// augments one unit at a time while a profitable path exists, then reads
/// the duals off shortest-path potentials of the final residual graph.
/// An absent reward entry means the edge does not exist.
AssignmentResult solve_b_matching(const std::vector<std::vector<std::optional<double>>>& reward,
                                  const std::vector<int>& cap);

}  // namespace omkd::flow
