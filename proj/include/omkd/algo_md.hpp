#pragma once

#include <utility>

#include "omkd/instance.hpp"
#include "omkd/trace.hpp"

namespace omkd {

/// Argmax of v_nk minus the posted cost summed over every dimension and
/// slot. Identical to select_resource; costs are dimension-additive.
std::pair<int, double> select_resource_md(const Request& req, const PriceState& state);

/// One request of Algorithm 3: admission by total posted cost, then a
/// per-dimension price update with factors (mu_nk*m, beta_nk*m).
Decision step_md(Trace& trace, const Instance& inst, int request_index,
                 const RunOptions& opt = {});

/// Runs Algorithm 3 over all requests in arrival order.
Trace run_md(const Instance& inst, const RunOptions& opt = {});

}  // namespace omkd
