#pragma once

#include <utility>

#include "omkd/instance.hpp"
#include "omkd/trace.hpp"

namespace omkd {

/// Argmax over the request's offers of v_nk minus the posted cost at the
/// current prices. Ties go to the lowest resource id. Returns the chosen
/// resource and the winning residual (which may be <= 0).
std::pair<int, double> select_resource(const Request& req, const PriceState& state);

/// Processes one request against the trace's price state: admit when the
/// residual is strictly positive, set u_n, update prices over T_nk*, and
/// record the primal/dual deltas. Appends the decision to the trace.
Decision step_basic(Trace& trace, const Instance& inst, int request_index,
                    const RunOptions& opt = {});

/// Runs Algorithm 1 over all requests in arrival order.
Trace run_basic(const Instance& inst, const RunOptions& opt = {});

namespace detail {

/// Shared per-request engine of the basic and multi-dimensional variants
/// (they differ only in how gamma was derived).
Decision step_online(Trace& trace, const Instance& inst, int request_index,
                     const RunOptions& opt);

/// Post-run audit: capacity feasibility, dual feasibility of the final
/// certificate, and the incremental-vs-closed-form dual cross-check.
void finalize_audit(Trace& trace, const Instance& inst);

bool would_overflow(const PriceState& state, const Offer& offer, int k);

/// Verifies p = density_min (e^{gamma z / C} - 1) on the given slots,
/// recording a CLOSED_FORM issue on mismatch.
void check_closed_form(Trace& trace, int step, int k, int m, int start, int duration);

}  // namespace detail

}  // namespace omkd
