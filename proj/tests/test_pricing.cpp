#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omkd/pricing.hpp"
#include "support/builders.hpp"
#include "support/enumeration.hpp"

using namespace omkd;
using namespace omkd::testing;

namespace {

PriceState fresh_state(double capacity, int horizon, double gamma, double density_min) {
  Instance inst = basic_single(capacity, horizon, {{0, offer1(1.0, 1.0, 0, 1)}});
  ResourcePricing rp;
  rp.gamma = gamma;
  rp.density_min = density_min;
  rp.defined = true;
  return PriceState(inst, {rp});
}

}  // namespace

TEST_CASE("gamma for the single-dimension variants") {
  CHECK(gamma_basic(1.0, 1.0) == doctest::Approx(3.58351893845611).epsilon(1e-12));
  CHECK(gamma_basic(4.0, 3.0) == doctest::Approx(7.824046010856292).epsilon(1e-12));
  CHECK(gamma_basic(1.0, 1.0) >= 2.0 * std::log(6.0));
  CHECK_THROWS_AS(gamma_basic(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_basic(1.0, 0.0), std::domain_error);
}

TEST_CASE("gamma for the multi-dimensional variant") {
  CHECK(gamma_md(1.0, 1.0, 1.0) == doctest::Approx(3.58351893845611).epsilon(1e-12));
  CHECK(gamma_md(2.0, 2.0, 3.0) == doctest::Approx(7.824046010856292).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_md(1.0, 1.0, 0.9), std::domain_error);
}

TEST_CASE("gamma_md with xi = 1 reproduces gamma_basic bit for bit") {
  TestRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 1.0 + 10.0 * rng.uniform();
    const double b = 1.0 + 10.0 * rng.uniform();
    CHECK(gamma_md(a, b, 1.0) == gamma_basic(a, b));
  }
}

TEST_CASE("update factors") {
  const double gamma = 2.0 * std::log(50.0);
  const UpdateFactors f = update_factors(1.0, 10.0, gamma, 1.0);
  CHECK(f.mu == doctest::Approx(2.186724147886556).epsilon(1e-12));
  CHECK(f.beta == doctest::Approx(1.1867241478865558).epsilon(1e-12));

  const UpdateFactors idle = update_factors(0.0, 10.0, gamma, 1.0);
  CHECK(idle.mu == 1.0);
  CHECK(idle.beta == 0.0);

  // beta = density_min * (mu - 1): pick w so that mu = 1.5 exactly.
  const double w = 10.0 * std::log(1.5) / gamma;
  const UpdateFactors scaled = update_factors(w, 10.0, gamma, 2.0);
  CHECK(scaled.beta == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(update_factors(1.0, 0.0, gamma, 1.0), std::domain_error);
  CHECK_THROWS_AS(update_factors(1.0, 10.0, gamma, 0.0), std::domain_error);
}

TEST_CASE("closed-form price") {
  const double gamma = 2.0 * std::log(50.0);
  CHECK(closed_form_price(1.0, gamma, 0.0, 10.0) == 0.0);
  CHECK(closed_form_price(2.0, gamma, 10.0, 10.0) ==
        doctest::Approx(2.0 * (std::exp(gamma) - 1.0)).epsilon(1e-12));
  CHECK(closed_form_price(1.0, gamma, 2.0, 10.0) ==
        doctest::Approx(3.7817624989501857).epsilon(1e-12));
}

TEST_CASE("price update base case and iteration match the closed form") {
  const double gamma = 2.0 * std::log(50.0);
  PriceState state = fresh_state(10.0, 8, gamma, 1.0);

  const UpdateFactors f = update_factors(1.0, 10.0, gamma, 1.0);
  state.apply_update(0, 0, 2, 3, f, 1.0);
  CHECK(state.price(0, 0, 2) == doctest::Approx(f.beta).epsilon(1e-12));  // p = 0 -> beta
  CHECK(state.price(0, 0, 1) == 0.0);

  state.apply_update(0, 0, 2, 3, f, 1.0);
  // two unit-weight updates: e^{2 gamma / C} - 1 = 50^{0.4} - 1
  CHECK(state.price(0, 0, 3) == doctest::Approx(3.781762498950184).epsilon(1e-9));
  CHECK(state.utilization(0, 0, 2) == doctest::Approx(2.0));
}

TEST_CASE("zero-weight updates are exact no-ops") {
  PriceState state = fresh_state(10.0, 8, gamma_basic(1, 1), 1.0);
  state.apply_update(0, 0, 0, 4, update_factors(0.0, 10.0, 3.0, 1.0), 0.0);
  CHECK(state.cells(0, 0).empty());
  CHECK(state.capacity_price_total() == 0.0);
}

TEST_CASE("updates outside the horizon are rejected") {
  PriceState state = fresh_state(10.0, 8, gamma_basic(1, 1), 1.0);
  const UpdateFactors f = update_factors(1.0, 10.0, 3.0, 1.0);
  CHECK_THROWS_AS(state.apply_update(0, 0, 6, 3, f, 1.0), std::out_of_range);
  CHECK_THROWS_AS(state.apply_update(0, 0, -1, 2, f, 1.0), std::out_of_range);
}

TEST_CASE("posted cost sums over dimensions and slots") {
  Instance inst;
  inst.variant = Variant::md;
  inst.horizon = 8;
  Resource res;
  res.id = 0;
  res.capacities = {10.0, 4.0};
  inst.resources.push_back(res);
  Request req;
  req.id = 0;
  req.arrival = 0;
  req.offers.emplace(0, offer_md(1.0, {1.0, 1.0}, {0, 0}, {1, 1}));
  inst.requests.push_back(req);
  inst.check_structure();

  ResourcePricing rp{gamma_basic(1, 1), 1.0, true};
  PriceState state(inst, {rp});
  CHECK(state.posted_cost(offer_md(1.0, {2.0}, {0}, {3}), 0) == 0.0);  // fresh state
  // Seed prices directly: dimension 0 slots {0,1,2} at 0.5 each,
  // dimension 1 slot {1} at 0.25.
  state.apply_update(0, 0, 0, 3, UpdateFactors{1.0, 0.5}, 0.5);
  state.apply_update(0, 1, 1, 1, UpdateFactors{1.0, 0.25}, 0.1);

  CHECK(state.posted_cost(offer_md(1.0, {2.0}, {0}, {3}), 0) == doctest::Approx(3.0));
  const Offer two_dim = offer_md(1.0, {1.0, 2.0}, {0, 1}, {2, 1});
  // dim0: 1 * (0.5 + 0.5) = 1.0; dim1: 2 * 0.25 = 0.5
  CHECK(state.posted_cost(two_dim, 0) == doctest::Approx(1.5));

  // Additivity: total equals the sum of single-dimension posted costs.
  const Offer only0 = offer_md(1.0, {1.0, 0.0}, {0, 1}, {2, 1});
  const Offer only1 = offer_md(1.0, {0.0, 2.0}, {0, 1}, {2, 1});
  CHECK(state.posted_cost(two_dim, 0) ==
        doctest::Approx(state.posted_cost(only0, 0) + state.posted_cost(only1, 0)));
}

TEST_CASE("closed-form identity holds under random admissible update sequences") {
  TestRng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const double capacity = 5.0 + 10.0 * rng.uniform();
    const double gamma = gamma_basic(1.0 + 7.0 * rng.uniform(), 1.0 + 3.0 * rng.uniform());
    const double density_min = 0.5 + rng.uniform();
    PriceState state = fresh_state(capacity, 16, gamma, density_min);

    double last_price = 0.0;
    for (int step = 0; step < 40; ++step) {
      const double w = rng.uniform() < 0.1 ? 0.0 : capacity * 0.2 * rng.uniform();
      const int start = rng.uniform_int(0, 12);
      const int len = rng.uniform_int(1, 4);
      const UpdateFactors f = update_factors(w, capacity, gamma, density_min);
      state.apply_update(0, 0, start, len, f, w);

      for (const auto& [t, cell] : state.cells(0, 0)) {
        const double expected = closed_form_price(density_min, gamma, cell.util, capacity);
        CHECK(std::abs(cell.price - expected) <=
              std::max(1e-9 * std::abs(expected), 1e-12));
      }
      // Monotonicity spot check on one slot.
      const double now = state.price(0, 0, 6);
      CHECK(now >= last_price);
      last_price = now;
    }
  }
}
