#include "omkd/algo_basic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace omkd {

namespace {

constexpr double kClosedFormRelTol = 1e-9;
constexpr double kClosedFormAbsFloor = 1e-12;
constexpr double kCapacitySlack = 1e-9;
constexpr double kDualRelTol = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::admitted: return "admitted";
    case Outcome::rejected: return "rejected";
    case Outcome::guarded_rejected: return "guarded_rejected";
  }
  throw std::logic_error("unknown outcome");
}

double Trace::batch_dual(int k, int time) const {
  for (const BatchResult& br : batch_results) {
    if (br.time == time) return br.h[k];
  }
  return 0.0;
}

std::pair<int, double> select_resource(const Request& req, const PriceState& state) {
  int best_k = -1;
  double best_residual = 0.0;
  for (const auto& [k, offer] : req.offers) {
    const double residual = offer.reward - state.posted_cost(offer, k);
    if (best_k < 0 || residual > best_residual) {
      best_k = k;
      best_residual = residual;
    }
  }
  return {best_k, best_residual};
}

namespace detail {

void check_closed_form(Trace& trace, int step, int k, int m, int start, int duration) {
  const ResourcePricing& rp = trace.prices.params(k);
  const double cap = trace.prices.capacity(k, m);
  for (int t = start; t < start + duration; ++t) {
    const double stored = trace.prices.price(k, m, t);
    const double expected =
        closed_form_price(rp.density_min, rp.gamma, trace.prices.utilization(k, m, t), cap);
    if (std::abs(stored - expected) >
        std::max(kClosedFormRelTol * std::abs(expected), kClosedFormAbsFloor)) {
      trace.issues.push_back({"CLOSED_FORM", step,
                              "price " + fmt(stored) + " != closed form " + fmt(expected) +
                                  " at (k=" + std::to_string(k) + ", m=" + std::to_string(m) +
                                  ", t=" + std::to_string(t) + ")"});
    }
  }
}

bool would_overflow(const PriceState& state, const Offer& offer, int k) {
  for (int m = 0; m < offer.dims(); ++m) {
    const double cap = state.capacity(k, m);
    for (int t = offer.starts[m]; t < offer.starts[m] + offer.durations[m]; ++t) {
      if (state.utilization(k, m, t) + offer.weights[m] > cap * (1.0 + kCapacitySlack))
        return true;
    }
  }
  return false;
}

Decision step_online(Trace& trace, const Instance& inst, int request_index,
                     const RunOptions& opt) {
  const Request& req = inst.requests[request_index];
  const int step = static_cast<int>(trace.decisions.size());

  Decision dec;
  dec.request = req.id;
  std::tie(dec.k_star, dec.residual) = select_resource(req, trace.prices);

  if (dec.residual > 0.0) {
    const Offer& offer = req.offers.at(dec.k_star);
    if (opt.guarded && would_overflow(trace.prices, offer, dec.k_star)) {
      // Converted to a rejection, but u_n keeps the residual so the dual
      // certificate stays feasible; the assigned-iff-paid slackness rule is given up.
      dec.outcome = Outcome::guarded_rejected;
      dec.utility = dec.residual;
      dec.delta_d = dec.utility;
      trace.utilities[request_index] = dec.utility;
      trace.dual += dec.delta_d;
      ++trace.guarded_rejections;
    } else {
      dec.outcome = Outcome::admitted;
      dec.utility = dec.residual;
      dec.delta_p = offer.reward;
      dec.delta_d = dec.utility;
      const ResourcePricing& rp = trace.prices.params(dec.k_star);
      for (int m = 0; m < offer.dims(); ++m) {
        const double cap = trace.prices.capacity(dec.k_star, m);
        const UpdateFactors f =
            update_factors(offer.weights[m], cap, rp.gamma, rp.density_min);
        const double price_delta = trace.prices.apply_update(
            dec.k_star, m, offer.starts[m], offer.durations[m], f, offer.weights[m]);
        dec.delta_d += cap * price_delta;
        if (opt.audit)
          check_closed_form(trace, step, dec.k_star, m, offer.starts[m], offer.durations[m]);
      }
      trace.assignment[request_index] = dec.k_star;
      trace.utilities[request_index] = dec.utility;
      trace.primal += dec.delta_p;
      trace.dual += dec.delta_d;
      const double ratio = dec.delta_d / dec.delta_p;
      trace.max_step_ratio = std::max(trace.max_step_ratio, ratio);
      if (opt.audit) {
        const double bound = 2.0 * rp.gamma / std::log(2.0);
        if (dec.delta_d > bound * dec.delta_p) {
          trace.issues.push_back({"STEP_RATIO", step,
                                  "dD/dP = " + fmt(ratio) + " exceeds 2*gamma/ln2 = " +
                                      fmt(bound)});
        }
      }
    }
  }

  if (opt.audit) {
    // Dual feasibility at decision time: u_n covers the residual of every
    // offered resource by the argmax choice (1-ulp slack for the k* sum).
    for (const auto& [k, offer] : req.offers) {
      const double cost = trace.prices.posted_cost(offer, k);
      if (dec.utility + cost < offer.reward - 1e-12 * std::max(1.0, offer.reward)) {
        trace.issues.push_back({"DUAL_FEASIBILITY", step,
                                "u_n + posted cost " + fmt(dec.utility + cost) + " < reward " +
                                    fmt(offer.reward) + " on resource " + std::to_string(k)});
      }
    }
    if (trace.dual < trace.primal - kDualRelTol * std::max(1.0, trace.primal)) {
      trace.issues.push_back(
          {"WEAK_DUALITY", step, "D = " + fmt(trace.dual) + " < P = " + fmt(trace.primal)});
    }
  }

  trace.decisions.push_back(dec);
  return dec;
}

void finalize_audit(Trace& trace, const Instance& inst) {
  // Primal feasibility of the final assignment.
  for (int k = 0; k < inst.num_resources(); ++k) {
    const Resource& res = inst.resources[k];
    for (int m = 0; m < res.dims(); ++m) {
      for (const auto& [t, cell] : trace.prices.cells(k, m)) {
        if (cell.util > res.capacities[m] * (1.0 + kCapacitySlack)) {
          trace.issues.push_back({"CAPACITY", -1,
                                  "utilization " + fmt(cell.util) + " > capacity " +
                                      fmt(res.capacities[m]) + " at (k=" + std::to_string(k) +
                                      ", m=" + std::to_string(m) + ", t=" + std::to_string(t) +
                                      ")"});
        }
      }
    }
  }

  // Full closed-form sweep over every stored price.
  for (int k = 0; k < inst.num_resources(); ++k) {
    const ResourcePricing& rp = trace.prices.params(k);
    for (int m = 0; m < inst.resources[k].dims(); ++m) {
      const double cap = trace.prices.capacity(k, m);
      for (const auto& [t, cell] : trace.prices.cells(k, m)) {
        const double expected = closed_form_price(rp.density_min, rp.gamma, cell.util, cap);
        if (std::abs(cell.price - expected) >
            std::max(kClosedFormRelTol * std::abs(expected), kClosedFormAbsFloor)) {
          trace.issues.push_back({"CLOSED_FORM", -1,
                                  "final price " + fmt(cell.price) + " != closed form " +
                                      fmt(expected)});
        }
      }
    }
  }

  // Dual feasibility of the final certificate, with final prices.
  for (int n = 0; n < inst.num_requests(); ++n) {
    const Request& req = inst.requests[n];
    for (const auto& [k, offer] : req.offers) {
      double lhs = trace.utilities[n] + trace.prices.posted_cost(offer, k);
      if (trace.variant == Variant::lb) lhs += trace.batch_dual(k, req.arrival);
      if (lhs < offer.reward - kDualRelTol * std::max(1.0, offer.reward)) {
        trace.issues.push_back({"DUAL_FEASIBILITY", -1,
                                "final certificate violates constraint of request " +
                                    std::to_string(req.id) + " on resource " +
                                    std::to_string(k) + ": " + fmt(lhs) + " < " +
                                    fmt(offer.reward)});
      }
    }
  }

  // Incrementally accumulated D must match the closed-form dual objective.
  double closed = trace.prices.capacity_price_total();
  for (double u : trace.utilities) closed += u;
  for (const BatchResult& br : trace.batch_results) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      closed += static_cast<double>(*inst.resources[k].batch_cap) * br.h[k];
    }
  }
  if (std::abs(trace.dual - closed) > kDualRelTol * std::max(1.0, std::abs(closed))) {
    trace.issues.push_back({"DUAL_CROSSCHECK", -1,
                            "accumulated D = " + fmt(trace.dual) +
                                " != closed-form D = " + fmt(closed)});
  }
}

}  // namespace detail

Decision step_basic(Trace& trace, const Instance& inst, int request_index,
                    const RunOptions& opt) {
  return detail::step_online(trace, inst, request_index, opt);
}

Trace run_basic(const Instance& inst, const RunOptions& opt) {
  if (inst.variant != Variant::basic)
    throw std::invalid_argument("run_basic requires a basic-variant instance");
  const FluctuationStats stats = fluctuation_stats(inst);
  const std::vector<ResourceBounds> bounds = effective_bounds(inst, stats);
  Trace trace(inst, pricing_params(inst, bounds, Variant::basic));
  trace.variant = Variant::basic;
  for (int n = 0; n < inst.num_requests(); ++n) detail::step_online(trace, inst, n, opt);
  if (opt.audit) detail::finalize_audit(trace, inst);
  return trace;
}

}  // namespace omkd
