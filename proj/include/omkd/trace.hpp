#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omkd/pricing.hpp"

namespace omkd {

enum class Outcome { admitted, rejected, guarded_rejected };

std::string to_string(Outcome o);

struct Decision {
  int request = -1;        // request id
  Outcome outcome = Outcome::rejected;
  int k_star = -1;         // argmax resource, valid even when rejected
  double residual = 0.0;   // best v - posted cost at decision time
  double utility = 0.0;    // u_n
  double delta_p = 0.0;
  double delta_d = 0.0;
};

/// A detected invariant break, recorded by the in-run audit.
struct AuditIssue {
  std::string code;  // CLOSED_FORM, STEP_RATIO, DUAL_FEASIBILITY, WEAK_DUALITY,
                     // CAPACITY, BATCH_CAP, DUAL_CROSSCHECK, LP_DUALITY
  int step = -1;
  std::string message;
};

/// One processed batch of the load-balancing variant.
struct BatchResult {
  int time = 0;
  std::vector<int> requests;    // indices into Instance::requests
  std::vector<int> assignment;  // per batch member: resource id or -1
  std::vector<double> u;        // per batch member
  std::vector<double> h;        // per resource, h_ki
  double lp_value = 0.0;        // sum of assigned residual rewards
  double delta_p = 0.0;
  double delta_d = 0.0;
};

struct Trace {
  Variant variant = Variant::basic;
  std::vector<Decision> decisions;              // one per request, arrival order
  std::vector<std::optional<int>> assignment;   // request index -> resource
  std::vector<double> utilities;                // u_n by request index
  std::vector<BatchResult> batch_results;       // lb only
  PriceState prices;
  double primal = 0.0;          // P, sum of admitted rewards
  double dual = 0.0;            // D, accumulated per-step deltas
  double max_step_ratio = 0.0;  // max dD/dP over admitted steps (batches for lb)
  int guarded_rejections = 0;
  std::vector<AuditIssue> issues;

  Trace(const Instance& inst, std::vector<ResourcePricing> params)
      : prices(inst, std::move(params)) {
    assignment.resize(inst.num_requests());
    utilities.resize(inst.num_requests(), 0.0);
  }

  /// h_ki of the batch at time i (0 when the batch was empty or absent).
  double batch_dual(int k, int time) const;
};

struct RunOptions {
  bool guarded = false;  // reject admissions that would overflow a capacity
  bool audit = true;     // verify the analysis invariants while running
};

}  // namespace omkd
