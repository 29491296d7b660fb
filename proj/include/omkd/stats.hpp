#pragma once

#include <stdexcept>
#include <vector>

#include "omkd/instance.hpp"

namespace omkd {

/// Thrown when an offer promises a positive reward but consumes nothing
/// (every w*d product is zero), leaving its value density undefined.
struct degenerate_offer_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Value density of an offer: reward divided by total weight-time
/// consumed, v / sum_m(w_m * d_m). This is theta for single-dimension
/// offers and rho for multi-dimension ones. Zero-reward offers have
/// density 0 even when they consume nothing.
double value_density(const Offer& offer);

/// xi: sum of the dimensional weights over the minimum positive weight.
/// Always >= 1; equals 1 iff exactly one weight is positive.
double total_demand_fluctuation(const Offer& offer);

struct ResourceStats {
  bool defined = false;  // false when no offer with positive density targets the resource
  double density_min = 1.0;  // min over offers with positive density
  double density_max = 1.0;  // max over all offers
  double density_bar = 1.0;
  double d_min = 1.0;  // min over all (dimension, offer) durations
  double d_max = 1.0;
  double d_bar = 1.0;
  double xi_max = 1.0;
};

struct FluctuationStats {
  std::vector<ResourceStats> per_resource;
  std::vector<int> excluded;  // resources with no positive-density offer
  double density_bar_max = 1.0;
  double d_bar_max = 1.0;
  double xi_max = 1.0;
};

/// Realized statistics over every offer of the instance. Minima are taken
/// over strictly positive entries; resources without any positive-density
/// offer are excluded and listed. Throws degenerate_offer_error if any
/// offer has undefined density.
FluctuationStats fluctuation_stats(const Instance& inst);

/// What the online algorithm is allowed to know before the first arrival:
/// declared A1/A2 bounds where given, realized (clairvoyant) values
/// otherwise. Gamma and the price-update floor are derived from these.
struct ResourceBounds {
  bool defined = false;
  bool clairvoyant = false;  // true when any field fell back to realized values
  double density_min = 1.0;
  double density_max = 1.0;
  double density_bar = 1.0;
  double d_min = 1.0;
  double d_max = 1.0;
  double d_bar = 1.0;
  double xi_max = 1.0;
};

std::vector<ResourceBounds> effective_bounds(const Instance& inst, const FluctuationStats& stats);

}  // namespace omkd
