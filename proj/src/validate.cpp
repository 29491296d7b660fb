#include "omkd/validate.hpp"

#include <cmath>
#include <sstream>

#include "omkd/pricing.hpp"

namespace omkd {

namespace {

// Slack for comparing realized quantities against declared bounds;
// rewards are back-solved from densities, so 1-ulp drift is expected.
constexpr double kRelTol = 1e-9;

bool is_degenerate(const Offer& offer) {
  if (offer.reward <= 0.0) return false;
  double consumed = 0.0;
  for (int m = 0; m < offer.dims(); ++m) consumed += offer.weights[m] * offer.durations[m];
  return consumed <= 0.0;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

GuaranteeCheck guarantee_for_variant(Variant v) {
  switch (v) {
    case Variant::basic: return GuaranteeCheck::basic;
    case Variant::lb: return GuaranteeCheck::lb;
    case Variant::md: return GuaranteeCheck::md;
  }
  throw std::logic_error("unknown variant");
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream os;
  if (report.feasible_for_guarantee()) {
    os << "feasible-for-guarantee: yes\n";
  } else {
    os << "feasible-for-guarantee: no (" << report.violations.size() << " violation(s))\n";
    for (const Violation& v : report.violations) {
      os << "  [" << v.code << "]";
      if (v.request >= 0) os << " request " << v.request;
      if (v.resource >= 0) os << " resource " << v.resource;
      os << ": " << v.message << "\n";
    }
  }
  for (const std::string& note : report.notes) os << "  note: " << note << "\n";
  return os.str();
}

ValidationReport validate_instance(const Instance& inst, GuaranteeCheck check) {
  if (check == GuaranteeCheck::auto_variant) check = guarantee_for_variant(inst.variant);
  if (check == GuaranteeCheck::lb && inst.variant != Variant::lb)
    throw std::invalid_argument("the lb weight cap applies to load-balancing instances only");

  ValidationReport report;

  // Degenerate offers have no density, so the stats pass skips them.
  Instance sane = inst;
  for (Request& req : sane.requests) {
    for (auto it = req.offers.begin(); it != req.offers.end();) {
      if (is_degenerate(it->second)) {
        report.violations.push_back({"DEGENERATE_OFFER",
                                     "positive reward with zero total weight-time", req.id,
                                     it->first});
        it = req.offers.erase(it);
      } else {
        ++it;
      }
    }
  }

  const FluctuationStats stats = fluctuation_stats(sane);
  const std::vector<ResourceBounds> bounds = effective_bounds(sane, stats);

  for (int k : stats.excluded)
    report.notes.push_back("resource " + std::to_string(k) +
                           " has no positive-density offer; excluded from statistics");
  for (int k = 0; k < sane.num_resources(); ++k) {
    if (bounds[k].defined && bounds[k].clairvoyant)
      report.notes.push_back("resource " + std::to_string(k) +
                             " uses clairvoyant bounds computed from realized offers");
  }

  // A1/A2: realized densities and durations inside the known bounds.
  for (const Request& req : sane.requests) {
    for (const auto& [k, offer] : req.offers) {
      const ResourceBounds& b = bounds[k];
      if (!b.defined) continue;
      const double density = value_density(offer);
      if (density > 0.0 &&
          (density < b.density_min * (1.0 - kRelTol) ||
           density > b.density_max * (1.0 + kRelTol))) {
        report.violations.push_back(
            {"A1",
             "value density " + fmt(density) + " outside [" + fmt(b.density_min) + ", " +
                 fmt(b.density_max) + "]",
             req.id, k});
      }
      for (int d : offer.durations) {
        if (d < b.d_min - kRelTol || d > b.d_max + kRelTol) {
          report.violations.push_back(
              {"A2",
               "duration " + std::to_string(d) + " outside [" + fmt(b.d_min) + ", " +
                   fmt(b.d_max) + "]",
               req.id, k});
        }
      }
    }
  }

  // A3 and the guarantee's weight cap, with epsilon as the realized
  // maximum weight. Gamma comes from the same bounds the algorithm uses.
  const Variant gamma_variant = check == GuaranteeCheck::md ? Variant::md : Variant::basic;
  const std::vector<ResourcePricing> params = pricing_params(sane, bounds, gamma_variant);
  const double ln2 = std::log(2.0);

  for (const Request& req : sane.requests) {
    for (const auto& [k, offer] : req.offers) {
      const Resource& res = sane.resources[k];
      for (int m = 0; m < offer.dims(); ++m) {
        const double w = offer.weights[m];
        const double cap = res.capacities[m];
        if (w > cap * (1.0 + kRelTol)) {
          report.violations.push_back(
              {"A3", "weight " + fmt(w) + " exceeds capacity " + fmt(cap), req.id, k});
          continue;
        }
        if (check == GuaranteeCheck::none || !params[k].defined) continue;
        double limit = cap * ln2 / params[k].gamma;
        if (check == GuaranteeCheck::lb) limit /= static_cast<double>(*res.batch_cap);
        if (w > limit * (1.0 + kRelTol)) {
          report.violations.push_back({"WEIGHT_CAP",
                                       "weight " + fmt(w) + " exceeds the guarantee cap " +
                                           fmt(limit),
                                       req.id, k});
        }
      }
    }
  }

  return report;
}

}  // namespace omkd
