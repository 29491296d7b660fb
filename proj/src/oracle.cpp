#include "omkd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "omkd/pricing.hpp"
#include "omkd/stats.hpp"

namespace omkd {

namespace {

constexpr double kCapacitySlack = 1e-9;
constexpr double kDualRelTol = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

struct BnB {
  const Instance& inst;
  std::vector<std::vector<std::vector<double>>> usage;  // [k][m][t]
  std::vector<std::vector<int>> batch_count;            // [batch][k], lb only
  std::vector<int> batch_of;                            // request -> batch index
  std::vector<double> suffix_best;                      // n -> max attainable from n on
  std::vector<std::vector<int>> offer_order;            // n -> resource ids, reward-descending
  std::vector<int> current, best_assignment;
  double best_value = 0.0;
  long long nodes = 0;

  explicit BnB(const Instance& instance) : inst(instance) {
    const int N = inst.num_requests();
    usage.resize(inst.num_resources());
    for (int k = 0; k < inst.num_resources(); ++k) {
      usage[k].assign(inst.resources[k].dims(), std::vector<double>(inst.horizon, 0.0));
    }
    if (inst.variant == Variant::lb) {
      batch_of.resize(N);
      std::map<int, int> batch_index;
      for (int n = 0; n < N; ++n) {
        auto [it, inserted] = batch_index.try_emplace(inst.requests[n].arrival,
                                                      static_cast<int>(batch_count.size()));
        if (inserted) batch_count.emplace_back(inst.num_resources(), 0);
        batch_of[n] = it->second;
      }
    }
    suffix_best.assign(N + 1, 0.0);
    for (int n = N - 1; n >= 0; --n) {
      double best = 0.0;
      for (const auto& [k, offer] : inst.requests[n].offers) best = std::max(best, offer.reward);
      suffix_best[n] = suffix_best[n + 1] + best;
    }
    offer_order.resize(N);
    for (int n = 0; n < N; ++n) {
      for (const auto& [k, offer] : inst.requests[n].offers) offer_order[n].push_back(k);
      std::sort(offer_order[n].begin(), offer_order[n].end(), [&](int a, int b) {
        const double va = inst.requests[n].offers.at(a).reward;
        const double vb = inst.requests[n].offers.at(b).reward;
        return va != vb ? va > vb : a < b;
      });
    }
    current.assign(N, -1);
    best_assignment.assign(N, -1);
  }

  bool fits(int n, int k) const {
    const Offer& offer = inst.requests[n].offers.at(k);
    for (int m = 0; m < offer.dims(); ++m) {
      const double cap = inst.resources[k].capacities[m] * (1.0 + kCapacitySlack);
      for (int t = offer.starts[m]; t < offer.starts[m] + offer.durations[m]; ++t) {
        if (usage[k][m][t] + offer.weights[m] > cap) return false;
      }
    }
    if (inst.variant == Variant::lb &&
        batch_count[batch_of[n]][k] >= *inst.resources[k].batch_cap)
      return false;
    return true;
  }

  // Backtracking restores saved slot values instead of subtracting, so
  // repeated place/unplace cycles cannot accumulate float drift.
  std::vector<double> saved;

  void place(int n, int k) {
    const Offer& offer = inst.requests[n].offers.at(k);
    for (int m = 0; m < offer.dims(); ++m) {
      for (int t = offer.starts[m]; t < offer.starts[m] + offer.durations[m]; ++t) {
        saved.push_back(usage[k][m][t]);
        usage[k][m][t] += offer.weights[m];
      }
    }
    if (inst.variant == Variant::lb) ++batch_count[batch_of[n]][k];
  }

  void unplace(int n, int k) {
    const Offer& offer = inst.requests[n].offers.at(k);
    for (int m = offer.dims() - 1; m >= 0; --m) {
      for (int t = offer.starts[m] + offer.durations[m] - 1; t >= offer.starts[m]; --t) {
        usage[k][m][t] = saved.back();
        saved.pop_back();
      }
    }
    if (inst.variant == Variant::lb) --batch_count[batch_of[n]][k];
  }

  void dfs(int n, double value) {
    ++nodes;
    if (n == inst.num_requests()) {
      if (value > best_value) {
        best_value = value;
        best_assignment = current;
      }
      return;
    }
    if (value + suffix_best[n] <= best_value) return;
    for (int k : offer_order[n]) {
      if (!fits(n, k)) continue;
      place(n, k);
      current[n] = k;
      dfs(n + 1, value + inst.requests[n].offers.at(k).reward);
      current[n] = -1;
      unplace(n, k);
    }
    dfs(n + 1, value);
  }
};

}  // namespace

OfflineSolution exact_optimum(const Instance& inst, int request_cap) {
  if (inst.num_requests() > request_cap) {
    throw size_cap_error("exact_optimum: instance has " + std::to_string(inst.num_requests()) +
                         " requests, cap is " + std::to_string(request_cap));
  }
  BnB solver(inst);
  solver.dfs(0, 0.0);
  OfflineSolution sol;
  sol.value = solver.best_value;
  sol.assignment = solver.best_assignment;
  sol.nodes_explored = solver.nodes;
  return sol;
}

CertificateReport verify_dual_certificate(const Instance& inst, const Trace& trace,
                                          std::optional<double> offline_value) {
  CertificateReport report;
  auto violate = [&](const std::string& msg, double magnitude) {
    report.violations.push_back(msg);
    report.max_violation = std::max(report.max_violation, magnitude);
  };

  for (int n = 0; n < inst.num_requests(); ++n) {
    if (trace.utilities[n] < 0.0)
      violate("u_" + std::to_string(n) + " negative", -trace.utilities[n]);
  }
  for (const BatchResult& br : trace.batch_results) {
    for (double h : br.h) {
      if (h < 0.0) violate("negative h at batch " + std::to_string(br.time), -h);
    }
  }
  for (int k = 0; k < inst.num_resources(); ++k) {
    for (int m = 0; m < inst.resources[k].dims(); ++m) {
      for (const auto& [t, cell] : trace.prices.cells(k, m)) {
        if (cell.price < 0.0)
          violate("negative price at (" + std::to_string(k) + "," + std::to_string(m) + "," +
                      std::to_string(t) + ")",
                  -cell.price);
      }
    }
  }

  // Dual constraints with the final prices.
  for (int n = 0; n < inst.num_requests(); ++n) {
    const Request& req = inst.requests[n];
    for (const auto& [k, offer] : req.offers) {
      double lhs = trace.utilities[n] + trace.prices.posted_cost(offer, k);
      if (trace.variant == Variant::lb) lhs += trace.batch_dual(k, req.arrival);
      const double slack = offer.reward - lhs;
      if (slack > 1e-9 * std::max(1.0, offer.reward)) {
        violate("dual constraint of request " + std::to_string(req.id) + " on resource " +
                    std::to_string(k) + " violated by " + fmt(slack),
                slack);
      }
    }
  }

  // Accumulated D against the closed-form dual objective.
  double closed = trace.prices.capacity_price_total();
  for (double u : trace.utilities) closed += u;
  for (const BatchResult& br : trace.batch_results) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      closed += static_cast<double>(*inst.resources[k].batch_cap) * br.h[k];
    }
  }
  const double gap = std::abs(trace.dual - closed);
  if (gap > kDualRelTol * std::max(1.0, std::abs(closed)))
    violate("accumulated D " + fmt(trace.dual) + " != closed-form D " + fmt(closed), gap);

  // Recomputed P against the trace.
  double primal = 0.0;
  for (int n = 0; n < inst.num_requests(); ++n) {
    if (trace.assignment[n]) primal += inst.requests[n].offers.at(*trace.assignment[n]).reward;
  }
  if (std::abs(primal - trace.primal) > 1e-9 * std::max(1.0, primal))
    violate("P " + fmt(trace.primal) + " != recomputed " + fmt(primal),
            std::abs(primal - trace.primal));

  if (offline_value) {
    const double deficit = *offline_value - closed;
    if (deficit > kDualRelTol * std::max(1.0, *offline_value))
      violate("D " + fmt(closed) + " < offline optimum " + fmt(*offline_value), deficit);
  }
  return report;
}

double empirical_cr(double online_value, double offline_value) {
  if (online_value <= 0.0) {
    return offline_value > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return offline_value / online_value;
}

double empirical_cr(const Trace& trace, const OfflineSolution& offline) {
  return empirical_cr(trace.primal, offline.value);
}

double theoretical_cr_bound(const std::vector<ResourceBounds>& bounds, Variant variant) {
  double gamma_max = gamma_basic(1.0, 1.0);
  for (const ResourceBounds& b : bounds) {
    if (!b.defined) continue;
    const double g = variant == Variant::md ? gamma_md(b.density_bar, b.d_bar, b.xi_max)
                                            : gamma_basic(b.density_bar, b.d_bar);
    gamma_max = std::max(gamma_max, g);
  }
  return 2.0 * gamma_max / std::log(2.0);
}

double theoretical_cr_bound(const FluctuationStats& stats, Variant variant) {
  std::vector<ResourceBounds> bounds;
  for (const ResourceStats& rs : stats.per_resource) {
    ResourceBounds b;
    b.defined = rs.defined;
    b.density_min = rs.density_min;
    b.density_max = rs.density_max;
    b.density_bar = rs.density_bar;
    b.d_min = rs.d_min;
    b.d_max = rs.d_max;
    b.d_bar = rs.d_bar;
    b.xi_max = rs.xi_max;
    bounds.push_back(b);
  }
  return theoretical_cr_bound(bounds, variant);
}

}  // namespace omkd
