#include "omkd/algo_md.hpp"

#include <stdexcept>

#include "omkd/algo_basic.hpp"

namespace omkd {

std::pair<int, double> select_resource_md(const Request& req, const PriceState& state) {
  return select_resource(req, state);
}

Decision step_md(Trace& trace, const Instance& inst, int request_index, const RunOptions& opt) {
  return detail::step_online(trace, inst, request_index, opt);
}

Trace run_md(const Instance& inst, const RunOptions& opt) {
  if (inst.variant != Variant::md)
    throw std::invalid_argument("run_md requires a multi-dimensional instance");
  const FluctuationStats stats = fluctuation_stats(inst);
  const std::vector<ResourceBounds> bounds = effective_bounds(inst, stats);
  Trace trace(inst, pricing_params(inst, bounds, Variant::md));
  trace.variant = Variant::md;
  for (int n = 0; n < inst.num_requests(); ++n) detail::step_online(trace, inst, n, opt);
  if (opt.audit) detail::finalize_audit(trace, inst);
  return trace;
}

}  // namespace omkd
