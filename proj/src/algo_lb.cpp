#include "omkd/algo_lb.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "omkd/algo_basic.hpp"
#include "omkd/assignment.hpp"

namespace omkd {

namespace {

constexpr double kDualRelTol = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

std::vector<std::vector<std::optional<double>>> residual_rewards(
    const Instance& inst, const std::vector<int>& batch, const PriceState& state) {
  std::vector<std::vector<std::optional<double>>> r(
      batch.size(), std::vector<std::optional<double>>(inst.num_resources()));
  for (size_t i = 0; i < batch.size(); ++i) {
    const Request& req = inst.requests[batch[i]];
    for (const auto& [k, offer] : req.offers) {
      r[i][k] = offer.reward - state.posted_cost(offer, k);
    }
  }
  return r;
}

BatchSolution solve_batch_assignment(const std::vector<std::vector<std::optional<double>>>& r,
                                     const std::vector<int>& q) {
  for (int cap : q) {
    if (cap < 1) throw std::invalid_argument("batch caps must be >= 1");
  }
  // Only strictly positive residuals enter the batch LP.
  std::vector<std::vector<std::optional<double>>> positive(
      r.size(), std::vector<std::optional<double>>(q.size()));
  for (size_t n = 0; n < r.size(); ++n) {
    for (size_t k = 0; k < q.size(); ++k) {
      if (r[n][k] && *r[n][k] > 0.0) positive[n][k] = r[n][k];
    }
  }
  const flow::AssignmentResult flow = flow::solve_b_matching(positive, q);
  return {flow.match, flow.u, flow.h, flow.value};
}

BatchResult step_batch(Trace& trace, const Instance& inst, int time,
                       const std::vector<int>& batch, const RunOptions& opt) {
  if (batch.empty()) {
    BatchResult empty;
    empty.time = time;
    empty.h.assign(inst.num_resources(), 0.0);
    trace.batch_results.push_back(empty);
    return empty;
  }
  if (inst.requests[batch.front()].arrival != time)
    throw std::invalid_argument("step_batch: batch members must arrive at the batch time");
  const int first_step = static_cast<int>(trace.decisions.size());

  std::vector<int> q(inst.num_resources());
  for (int k = 0; k < inst.num_resources(); ++k) q[k] = *inst.resources[k].batch_cap;

  const auto r = residual_rewards(inst, batch, trace.prices);
  BatchSolution sol = solve_batch_assignment(r, q);

  if (opt.audit) {
    // Strong duality and feasibility of the extracted batch dual.
    double dual_value = 0.0;
    for (double u : sol.u) dual_value += u;
    for (int k = 0; k < inst.num_resources(); ++k) dual_value += q[k] * sol.h[k];
    if (std::abs(sol.value - dual_value) > kDualRelTol * std::max(1.0, std::abs(sol.value))) {
      trace.issues.push_back({"LP_DUALITY", first_step,
                              "batch LP primal " + fmt(sol.value) + " != dual " +
                                  fmt(dual_value)});
    }
    for (size_t i = 0; i < batch.size(); ++i) {
      for (int k = 0; k < inst.num_resources(); ++k) {
        if (r[i][k] && *r[i][k] > 0.0 &&
            sol.u[i] + sol.h[k] < *r[i][k] - 1e-9 * std::max(1.0, *r[i][k])) {
          trace.issues.push_back({"LP_DUALITY", first_step,
                                  "batch dual constraint u + h >= r violated: " +
                                      fmt(sol.u[i] + sol.h[k]) + " < " + fmt(*r[i][k])});
        }
      }
    }
  }

  BatchResult result;
  result.time = time;
  result.requests = batch;
  result.assignment = sol.assignment;
  result.u = sol.u;
  result.h = sol.h;
  result.lp_value = sol.value;

  std::vector<int> admitted_per_resource(inst.num_resources(), 0);
  for (size_t i = 0; i < batch.size(); ++i) {
    const int n = batch[i];
    const Request& req = inst.requests[n];
    const int step = static_cast<int>(trace.decisions.size());

    Decision dec;
    dec.request = req.id;
    const int k = sol.assignment[i];
    if (k >= 0) {
      dec.k_star = k;
      dec.residual = *r[i][k];
    } else {
      // Rejected: report the argmax over the batch-time residuals.
      for (int kk = 0; kk < inst.num_resources(); ++kk) {
        if (r[i][kk] && (dec.k_star < 0 || *r[i][kk] > dec.residual)) {
          dec.k_star = kk;
          dec.residual = *r[i][kk];
        }
      }
    }

    if (k >= 0) {
      const Offer& offer = req.offers.at(k);
      // u_n + h_ki is this request's share of the batch dual objective:
      // h_k is positive only when the batch fills all q_k seats of k, so
      // summing it over admitted members yields exactly q_k * h_k.
      dec.utility = sol.u[i];
      dec.delta_d = sol.u[i] + sol.h[k];
      trace.utilities[n] = sol.u[i];
      if (opt.guarded && detail::would_overflow(trace.prices, offer, k)) {
        // The dual bookkeeping stays in place so the certificate remains
        // feasible; only the admission and the price update are dropped.
        dec.outcome = Outcome::guarded_rejected;
        ++trace.guarded_rejections;
        result.assignment[i] = -1;
      } else {
        dec.outcome = Outcome::admitted;
        ++admitted_per_resource[k];
        dec.delta_p = offer.reward;
        const ResourcePricing& rp = trace.prices.params(k);
        for (int m = 0; m < offer.dims(); ++m) {
          const double cap = trace.prices.capacity(k, m);
          const UpdateFactors f = update_factors(offer.weights[m], cap, rp.gamma, rp.density_min);
          const double price_delta =
              trace.prices.apply_update(k, m, offer.starts[m], offer.durations[m], f,
                                        offer.weights[m]);
          dec.delta_d += cap * price_delta;
          if (opt.audit)
            detail::check_closed_form(trace, step, k, m, offer.starts[m], offer.durations[m]);
        }
        trace.assignment[n] = k;
        trace.primal += dec.delta_p;
      }
      trace.dual += dec.delta_d;
      result.delta_p += dec.delta_p;
      result.delta_d += dec.delta_d;
    }
    trace.decisions.push_back(dec);
    if (opt.audit && trace.dual < trace.primal - kDualRelTol * std::max(1.0, trace.primal)) {
      trace.issues.push_back(
          {"WEAK_DUALITY", step, "D = " + fmt(trace.dual) + " < P = " + fmt(trace.primal)});
    }
  }

  if (opt.audit) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      if (admitted_per_resource[k] > q[k]) {
        trace.issues.push_back({"BATCH_CAP", first_step,
                                "batch admitted " + std::to_string(admitted_per_resource[k]) +
                                    " requests to resource " + std::to_string(k) +
                                    " with q = " + std::to_string(q[k])});
      }
    }
    if (result.delta_p > 0.0) {
      double gamma_max = 0.0;
      for (int k = 0; k < inst.num_resources(); ++k) {
        if (trace.prices.params(k).defined)
          gamma_max = std::max(gamma_max, trace.prices.params(k).gamma);
      }
      const double bound = 2.0 * gamma_max / std::log(2.0);
      const double ratio = result.delta_d / result.delta_p;
      trace.max_step_ratio = std::max(trace.max_step_ratio, ratio);
      if (result.delta_d > bound * result.delta_p) {
        trace.issues.push_back({"STEP_RATIO", first_step,
                                "batch dD/dP = " + fmt(ratio) +
                                    " exceeds 2*gamma_max/ln2 = " + fmt(bound)});
      }
    }
  } else if (result.delta_p > 0.0) {
    trace.max_step_ratio = std::max(trace.max_step_ratio, result.delta_d / result.delta_p);
  }

  trace.batch_results.push_back(result);
  return result;
}

Trace run_lb(const Instance& inst, const RunOptions& opt) {
  if (inst.variant != Variant::lb)
    throw std::invalid_argument("run_lb requires a load-balancing instance");
  const FluctuationStats stats = fluctuation_stats(inst);
  const std::vector<ResourceBounds> bounds = effective_bounds(inst, stats);
  Trace trace(inst, pricing_params(inst, bounds, Variant::lb));
  trace.variant = Variant::lb;
  const auto batches = inst.batches();
  static const std::vector<int> kEmpty;
  for (int time = 0; time < inst.horizon; ++time) {
    const auto it = batches.find(time);
    step_batch(trace, inst, time, it == batches.end() ? kEmpty : it->second, opt);
  }
  if (opt.audit) detail::finalize_audit(trace, inst);
  return trace;
}

}  // namespace omkd
