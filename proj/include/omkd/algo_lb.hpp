#pragma once

#include <optional>
#include <vector>

#include "omkd/instance.hpp"
#include "omkd/trace.hpp"

namespace omkd {

/// Residual rewards r_nk = v_nk - w_nk * sum_{t in T_nk} p_kt for one
/// batch, rows in batch order, columns per resource. Entries without an
/// offer are absent (such pairs can never be assigned).
std::vector<std::vector<std::optional<double>>> residual_rewards(
    const Instance& inst, const std::vector<int>& batch, const PriceState& state);

struct BatchSolution {
  std::vector<int> assignment;  // per batch member: resource or -1
  std::vector<double> u;        // optimal dual, per batch member
  std::vector<double> h;        // optimal dual, per resource
  double value = 0.0;           // LP optimum, equals sum u + sum q h
};

/// Integral optimum of the per-batch assignment LP over the strictly
/// positive residuals, with per-resource caps q, plus an optimal dual.
BatchSolution solve_batch_assignment(const std::vector<std::vector<std::optional<double>>>& r,
                                     const std::vector<int>& q);

/// Processes the batch arriving at `time`: solves the assignment LP,
/// installs the duals, applies the price updates for every assigned pair
/// and appends one decision per batch member. An empty batch is a no-op
/// with zero deltas. Returns the recorded batch result.
BatchResult step_batch(Trace& trace, const Instance& inst, int time,
                       const std::vector<int>& batch, const RunOptions& opt = {});

/// Runs Algorithm 2 over every time slot in order.
Trace run_lb(const Instance& inst, const RunOptions& opt = {});

}  // namespace omkd
