#include "omkd/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace omkd {

double gamma_basic(double theta_bar, double d_bar) {
  if (!(theta_bar >= 1.0) || !(d_bar >= 1.0))
    throw std::domain_error("gamma_basic: fluctuation ratios must be >= 1");
  return 2.0 * std::log(2.0 + 4.0 * theta_bar * d_bar);
}

double gamma_md(double rho_bar, double d_bar, double xi_max) {
  if (!(rho_bar >= 1.0) || !(d_bar >= 1.0) || !(xi_max >= 1.0))
    throw std::domain_error("gamma_md: fluctuation ratios must be >= 1");
  return 2.0 * std::log(4.0 * rho_bar * d_bar * xi_max + 2.0);
}

UpdateFactors update_factors(double w, double capacity, double gamma, double density_min) {
  if (!(capacity > 0.0)) throw std::domain_error("update_factors: capacity must be > 0");
  if (!(gamma > 0.0)) throw std::domain_error("update_factors: gamma must be > 0");
  if (!(w >= 0.0)) throw std::domain_error("update_factors: weight must be >= 0");
  if (!(density_min > 0.0)) throw std::domain_error("update_factors: density_min must be > 0");
  if (w == 0.0) return {1.0, 0.0};
  UpdateFactors f;
  f.mu = std::exp(w * gamma / capacity);
  f.beta = density_min * (f.mu - 1.0);
  return f;
}

double closed_form_price(double density_min, double gamma, double utilization, double capacity) {
  if (!(capacity > 0.0)) throw std::domain_error("closed_form_price: capacity must be > 0");
  return density_min * (std::exp(gamma * utilization / capacity) - 1.0);
}

std::vector<ResourcePricing> pricing_params(const Instance& inst,
                                            const std::vector<ResourceBounds>& bounds,
                                            Variant variant) {
  std::vector<ResourcePricing> params(inst.num_resources());
  for (int k = 0; k < inst.num_resources(); ++k) {
    const ResourceBounds& b = bounds[k];
    ResourcePricing& p = params[k];
    p.defined = b.defined;
    if (!b.defined) {
      // No positive-density offer can ever be admitted here, so the
      // parameters are inert; keep harmless defaults.
      p.gamma = gamma_basic(1.0, 1.0);
      p.density_min = 1.0;
      continue;
    }
    p.density_min = b.density_min;
    p.gamma = variant == Variant::md ? gamma_md(b.density_bar, b.d_bar, b.xi_max)
                                     : gamma_basic(b.density_bar, b.d_bar);
  }
  return params;
}

PriceState::PriceState(const Instance& inst, std::vector<ResourcePricing> params)
    : horizon_(inst.horizon), params_(std::move(params)) {
  if (static_cast<int>(params_.size()) != inst.num_resources())
    throw std::invalid_argument("PriceState: one pricing parameter set per resource required");
  capacities_.reserve(inst.resources.size());
  cells_.reserve(inst.resources.size());
  for (const Resource& res : inst.resources) {
    capacities_.push_back(res.capacities);
    cells_.emplace_back(res.dims());
  }
}

double PriceState::price(int k, int m, int t) const {
  const auto& slots = cells_[k][m];
  const auto it = slots.find(t);
  return it == slots.end() ? 0.0 : it->second.price;
}

double PriceState::utilization(int k, int m, int t) const {
  const auto& slots = cells_[k][m];
  const auto it = slots.find(t);
  return it == slots.end() ? 0.0 : it->second.util;
}

double PriceState::posted_cost(const Offer& offer, int k) const {
  double total = 0.0;
  for (int m = 0; m < offer.dims(); ++m) {
    double slot_sum = 0.0;
    for (int t = offer.starts[m]; t < offer.starts[m] + offer.durations[m]; ++t) {
      slot_sum += price(k, m, t);
    }
    total += offer.weights[m] * slot_sum;
  }
  return total;
}

double PriceState::apply_update(int k, int m, int start, int duration, const UpdateFactors& f,
                                double w) {
  if (start < 0 || start + duration > horizon_)
    throw std::out_of_range("apply_update: slot range outside the horizon");
  if (f.mu == 1.0 && f.beta == 0.0 && w == 0.0) return 0.0;  // exact no-op
  double delta = 0.0;
  auto& slots = cells_[k][m];
  for (int t = start; t < start + duration; ++t) {
    Cell& cell = slots[t];
    const double updated = f.mu * cell.price + f.beta;
    delta += updated - cell.price;
    cell.price = updated;
    cell.util += w;
  }
  return delta;
}

double PriceState::capacity_price_total() const {
  double total = 0.0;
  for (int k = 0; k < num_resources(); ++k) {
    for (int m = 0; m < static_cast<int>(capacities_[k].size()); ++m) {
      for (const auto& [t, cell] : cells_[k][m]) {
        total += capacities_[k][m] * cell.price;
      }
    }
  }
  return total;
}

}  // namespace omkd
