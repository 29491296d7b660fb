#pragma once

#include <map>
#include <vector>

#include "omkd/instance.hpp"
#include "omkd/stats.hpp"

namespace omkd {

/// gamma_k = 2 ln(2 + 4 * theta_bar * d_bar) for the single-dimension
/// variants. Requires both fluctuation ratios >= 1; always >= 2 ln 6.
double gamma_basic(double theta_bar, double d_bar);

/// gamma_k = 2 ln(4 * rho_bar * d_bar * xi_max + 2) for the
/// multi-dimensional variant. Reduces to gamma_basic when xi_max = 1.
double gamma_md(double rho_bar, double d_bar, double xi_max);

/// Price-update factors for admitting weight w on a dimension with
/// capacity C: the price becomes mu * p + beta on every occupied slot.
struct UpdateFactors {
  double mu = 1.0;    // e^{w * gamma / C}
  double beta = 0.0;  // density_min * (mu - 1)
};

UpdateFactors update_factors(double w, double capacity, double gamma, double density_min);

/// Price implied by the utilization alone:
/// density_min * (e^{gamma * z / C} - 1). The exponential update keeps
/// every stored price equal to this, which the audit verifies.
double closed_form_price(double density_min, double gamma, double utilization, double capacity);

struct ResourcePricing {
  double gamma = 0.0;
  double density_min = 1.0;  // theta_k_min or rho_k_min
  bool defined = false;      // false for resources with no positive-density offer
};

/// Per-resource pricing parameters from the bounds the algorithm knows.
/// `variant` selects which gamma formula applies (basic and lb share one).
std::vector<ResourcePricing> pricing_params(const Instance& inst,
                                            const std::vector<ResourceBounds>& bounds,
                                            Variant variant);

/// Dual prices p[k][m][t] and utilizations z[k][m][t], stored sparsely:
/// a slot absent from the map has p = z = 0. Single-writer; one state
/// per run.
class PriceState {
 public:
  struct Cell {
    double price = 0.0;
    double util = 0.0;
  };

  PriceState(const Instance& inst, std::vector<ResourcePricing> params);

  int horizon() const { return horizon_; }
  int num_resources() const { return static_cast<int>(capacities_.size()); }
  const ResourcePricing& params(int k) const { return params_[k]; }
  double capacity(int k, int m) const { return capacities_[k][m]; }

  double price(int k, int m, int t) const;
  double utilization(int k, int m, int t) const;

  /// w * sum_{t in T} p over every dimension of the offer.
  double posted_cost(const Offer& offer, int k) const;

  /// p <- mu*p + beta and z <- z + w on slots [start, start+duration).
  /// Returns the total price increase over the touched slots (used for
  /// the dual-objective delta). w = 0 with mu = 1, beta = 0 is a no-op.
  double apply_update(int k, int m, int start, int duration, const UpdateFactors& f, double w);

  /// sum_{k,m,t} C_km * p_kmt, the capacity part of the dual objective.
  double capacity_price_total() const;

  const std::map<int, Cell>& cells(int k, int m) const { return cells_[k][m]; }

 private:
  int horizon_;
  std::vector<std::vector<double>> capacities_;           // [k][m]
  std::vector<ResourcePricing> params_;                   // [k]
  std::vector<std::vector<std::map<int, Cell>>> cells_;   // [k][m] -> slot -> cell
};

}  // namespace omkd
