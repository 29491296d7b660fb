#pragma once

#include <string>
#include <vector>

#include "omkd/instance.hpp"
#include "omkd/stats.hpp"

namespace omkd {

/// Which weight-cap precondition to check on top of A1-A3. Each variant
/// has its own cap (basic: C ln2 / gamma, lb: additionally divided by
/// q_k, md: per dimension); auto_variant picks the one matching the
/// instance's variant tag.
enum class GuaranteeCheck { none, basic, lb, md, auto_variant };

GuaranteeCheck guarantee_for_variant(Variant v);

struct Violation {
  std::string code;     // A1, A2, A3, WEIGHT_CAP, DEGENERATE_OFFER
  std::string message;
  int request = -1;     // offending request id, -1 if not request-specific
  int resource = -1;    // offending resource id, -1 if not resource-specific
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;  // clairvoyant bounds, excluded resources

  bool feasible_for_guarantee() const { return violations.empty(); }
};

std::string format_report(const ValidationReport& report);

/// Checks A1 (densities within the declared bounds), A2 (durations within
/// bounds), A3 (weights at most capacity) and the requested guarantee's
/// weight cap with epsilon_k taken as the realized maximum weight on k.
/// Violations are data, not errors; this never throws on bad offers.
ValidationReport validate_instance(const Instance& inst,
                                   GuaranteeCheck check = GuaranteeCheck::auto_variant);

}  // namespace omkd
