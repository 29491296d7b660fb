#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omkd/instance.hpp"
#include "omkd/trace.hpp"

namespace omkd {

struct size_cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OfflineSolution {
  double value = 0.0;
  std::vector<int> assignment;  // per request index: resource or -1
  long long nodes_explored = 0;
  std::string method = "branch-and-bound";
};

/// Globally optimal integral assignment by depth-first branch-and-bound
/// over per-request choices, pruned by the remaining-reward bound and by
/// capacity infeasibility. Honors the variant's constraints (per-slot and
/// per-dimension capacities; per-batch q_k for lb). Refuses instances
/// with more than `request_cap` requests.
OfflineSolution exact_optimum(const Instance& inst, int request_cap = 20);

struct CertificateReport {
  std::vector<std::string> violations;
  double max_violation = 0.0;

  bool ok() const { return violations.empty(); }
};

/// Re-checks every dual constraint of the variant against the
/// trace's final (u, p[, h]), cross-checks the accumulated dual objective
/// against its closed form, and verifies D >= offline optimum when one is
/// supplied.
CertificateReport verify_dual_certificate(const Instance& inst, const Trace& trace,
                                          std::optional<double> offline_value = std::nullopt);

/// offline / online, with the conventions inf when online = 0 < offline
/// and 1 when both are 0.
double empirical_cr(double online_value, double offline_value);
double empirical_cr(const Trace& trace, const OfflineSolution& offline);

/// 2 gamma_max / ln 2, the per-step ratio bound realized by the analysis.
double theoretical_cr_bound(const std::vector<ResourceBounds>& bounds, Variant variant);
double theoretical_cr_bound(const FluctuationStats& stats, Variant variant);

}  // namespace omkd
