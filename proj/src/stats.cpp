#include "omkd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omkd {

double value_density(const Offer& offer) {
  double consumed = 0.0;
  for (int m = 0; m < offer.dims(); ++m) {
    consumed += offer.weights[m] * offer.durations[m];
  }
  if (consumed <= 0.0) {
    if (offer.reward > 0.0)
      throw degenerate_offer_error("positive reward with zero total weight-time");
    return 0.0;
  }
  return offer.reward / consumed;
}

double total_demand_fluctuation(const Offer& offer) {
  double sum = 0.0;
  double min_positive = std::numeric_limits<double>::infinity();
  for (double w : offer.weights) {
    sum += w;
    if (w > 0.0) min_positive = std::min(min_positive, w);
  }
  if (!std::isfinite(min_positive))
    throw degenerate_offer_error("xi is undefined when every weight is zero");
  return sum / min_positive;
}

FluctuationStats fluctuation_stats(const Instance& inst) {
  const int K = inst.num_resources();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> dens_min(K, inf), dens_max(K, 0.0);
  std::vector<double> dur_min(K, inf), dur_max(K, 0.0);
  std::vector<double> xi_max(K, 0.0);
  std::vector<bool> touched(K, false);

  for (const Request& req : inst.requests) {
    for (const auto& [k, offer] : req.offers) {
      touched[k] = true;
      const double density = value_density(offer);
      dens_max[k] = std::max(dens_max[k], density);
      if (density > 0.0) dens_min[k] = std::min(dens_min[k], density);
      for (int d : offer.durations) {
        dur_max[k] = std::max(dur_max[k], static_cast<double>(d));
        dur_min[k] = std::min(dur_min[k], static_cast<double>(d));
      }
      bool any_weight = false;
      for (double w : offer.weights) any_weight |= w > 0.0;
      if (any_weight) xi_max[k] = std::max(xi_max[k], total_demand_fluctuation(offer));
    }
  }

  FluctuationStats stats;
  stats.per_resource.resize(K);
  for (int k = 0; k < K; ++k) {
    ResourceStats& rs = stats.per_resource[k];
    if (!touched[k] || dens_max[k] <= 0.0) {
      stats.excluded.push_back(k);
      continue;
    }
    rs.defined = true;
    rs.density_min = dens_min[k];
    rs.density_max = dens_max[k];
    rs.density_bar = dens_max[k] / dens_min[k];
    rs.d_min = dur_min[k];
    rs.d_max = dur_max[k];
    rs.d_bar = dur_max[k] / dur_min[k];
    rs.xi_max = std::max(1.0, xi_max[k]);
    stats.density_bar_max = std::max(stats.density_bar_max, rs.density_bar);
    stats.d_bar_max = std::max(stats.d_bar_max, rs.d_bar);
    stats.xi_max = std::max(stats.xi_max, rs.xi_max);
  }
  return stats;
}

std::vector<ResourceBounds> effective_bounds(const Instance& inst, const FluctuationStats& stats) {
  std::vector<ResourceBounds> bounds(inst.num_resources());
  for (int k = 0; k < inst.num_resources(); ++k) {
    ResourceBounds& b = bounds[k];
    const ResourceStats& rs = stats.per_resource[k];
    const auto it = inst.declared_bounds.find(k);
    const DeclaredBounds* decl = it == inst.declared_bounds.end() ? nullptr : &it->second;

    if (decl && decl->density) {
      b.density_min = (*decl->density)[0];
      b.density_max = (*decl->density)[1];
    } else if (rs.defined) {
      b.density_min = rs.density_min;
      b.density_max = rs.density_max;
      b.clairvoyant = true;
    }

    if (decl && decl->duration) {
      b.d_min = (*decl->duration)[0];
      b.d_max = (*decl->duration)[1];
    } else if (rs.defined) {
      b.d_min = rs.d_min;
      b.d_max = rs.d_max;
      b.clairvoyant = true;
    }

    if (decl && decl->xi_max) {
      b.xi_max = *decl->xi_max;
    } else if (rs.defined) {
      b.xi_max = rs.xi_max;
      if (inst.variant == Variant::md) b.clairvoyant = true;
    }

    b.defined = rs.defined || (decl && decl->density);
    b.density_bar = b.density_max / b.density_min;
    b.d_bar = b.d_max / b.d_min;
  }
  return bounds;
}

}  // namespace omkd
