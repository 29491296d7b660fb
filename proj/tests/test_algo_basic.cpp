#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omkd/algo_basic.hpp"
#include "omkd/generate.hpp"
#include "omkd/oracle.hpp"
#include "omkd/validate.hpp"
#include "support/builders.hpp"
#include "support/enumeration.hpp"

using namespace omkd;
using namespace omkd::testing;

namespace {

Instance two_resources(double v0, double v1) {
  Instance inst;
  inst.variant = Variant::basic;
  inst.horizon = 4;
  for (int k = 0; k < 2; ++k) {
    Resource res;
    res.id = k;
    res.capacities = {10.0};
    inst.resources.push_back(res);
  }
  Request req;
  req.id = 0;
  req.arrival = 0;
  req.offers.emplace(0, offer1(v0, 1.0, 0, 1));
  req.offers.emplace(1, offer1(v1, 1.0, 0, 1));
  inst.requests.push_back(req);
  inst.check_structure();
  return inst;
}

ResourcePricing flat_pricing() { return {gamma_basic(1.0, 1.0), 1.0, true}; }

}  // namespace

TEST_CASE("selection at zero prices is the reward argmax") {
  Instance inst = two_resources(5.0, 3.0);
  PriceState state(inst, {flat_pricing(), flat_pricing()});
  const auto [k, residual] = select_resource(inst.requests[0], state);
  CHECK(k == 0);
  CHECK(residual == doctest::Approx(5.0));
}

TEST_CASE("selection ties break toward the lowest resource id") {
  Instance inst = two_resources(5.0, 5.0);
  PriceState state(inst, {flat_pricing(), flat_pricing()});
  CHECK(select_resource(inst.requests[0], state).first == 0);
}

TEST_CASE("posted costs shift the argmax") {
  Instance inst = two_resources(5.0, 3.0);
  PriceState state(inst, {flat_pricing(), flat_pricing()});
  // Seed prices 4.5 and 2.0 on slot 0 of each resource.
  state.apply_update(0, 0, 0, 1, UpdateFactors{1.0, 4.5}, 0.0);
  state.apply_update(1, 0, 0, 1, UpdateFactors{1.0, 2.0}, 0.0);
  const auto [k, residual] = select_resource(inst.requests[0], state);
  CHECK(k == 1);
  CHECK(residual == doctest::Approx(1.0));
}

TEST_CASE("fresh state admits any positive reward with u = v") {
  Instance inst = basic_single(10.0, 4, {{0, offer1(3.0, 1.0, 0, 2)}});
  Trace trace = run_basic(inst);
  REQUIRE(trace.decisions.size() == 1);
  const Decision& d = trace.decisions[0];
  CHECK(d.outcome == Outcome::admitted);
  CHECK(d.utility == doctest::Approx(3.0));
  CHECK(trace.primal == doctest::Approx(3.0));

  // D = u + C * 2 slots * beta with gamma from the clairvoyant flat bounds.
  const double gamma = gamma_basic(1.0, 1.0);
  const double beta = 1.5 * (std::exp(gamma / 10.0) - 1.0);
  CHECK(trace.dual == doctest::Approx(3.0 + 10.0 * 2.0 * beta).epsilon(1e-12));
  CHECK(trace.issues.empty());
}

TEST_CASE("a residual of exactly zero rejects") {
  Instance inst = basic_single(10.0, 4, {{0, offer1(3.0, 1.0, 0, 1)}});
  const FluctuationStats stats = fluctuation_stats(inst);
  Trace trace(inst, pricing_params(inst, effective_bounds(inst, stats), Variant::basic));
  trace.variant = Variant::basic;
  // Prices already equal the reward: v - w * p = 0, strict > fails.
  trace.prices.apply_update(0, 0, 0, 1, UpdateFactors{1.0, 3.0}, 0.0);
  const Decision d = step_basic(trace, inst, 0);
  CHECK(d.outcome == Outcome::rejected);
  CHECK(d.residual == doctest::Approx(0.0));
  CHECK(d.utility == 0.0);
  CHECK(d.delta_p == 0.0);
  CHECK(d.delta_d == 0.0);
}

TEST_CASE("hand-replayed two-request instance") {
  // C = 1, horizon {0,1}; n0: v=1, w=1, T={0,1}; n1: v=10, w=1, T={0}.
  // Declared theta in [1,10], d in [1,2] gives gamma = 2 ln 82, so n0's
  // admission prices both slots at 82^2 - 1 and n1 must be rejected.
  Instance inst = basic_single(1.0, 2, {{0, offer1(1.0, 1.0, 0, 2)}, {0, offer1(10.0, 1.0, 0, 1)}});
  inst.declared_bounds[0].density = {{1.0, 10.0}};
  inst.declared_bounds[0].duration = {{1.0, 2.0}};

  Trace trace = run_basic(inst);
  REQUIRE(trace.decisions.size() == 2);
  CHECK(trace.decisions[0].outcome == Outcome::admitted);
  CHECK(trace.decisions[1].outcome == Outcome::rejected);
  CHECK(trace.prices.price(0, 0, 0) == doctest::Approx(6723.0).epsilon(1e-9));
  CHECK(trace.decisions[1].residual == doctest::Approx(10.0 - 6723.0).epsilon(1e-9));
  CHECK(trace.primal == doctest::Approx(1.0));
  CHECK(trace.dual == doctest::Approx(13447.0).epsilon(1e-9));
  // w = C violates the guarantee weight cap, so the per-step ratio bound
  // is allowed to break here; nothing else may.
  for (const AuditIssue& issue : trace.issues) CHECK(issue.code == "STEP_RATIO");
}

TEST_CASE("empty instance yields P = D = 0") {
  Instance inst;
  inst.variant = Variant::basic;
  inst.horizon = 2;
  Resource res;
  res.id = 0;
  res.capacities = {1.0};
  inst.resources.push_back(res);
  inst.check_structure();
  Trace trace = run_basic(inst);
  CHECK(trace.primal == 0.0);
  CHECK(trace.dual == 0.0);
  CHECK(trace.decisions.empty());
}

TEST_CASE("strict mode can overfill on non-compliant instances, guarded cannot") {
  // w = C = 1 and flat declared bounds: gamma = 2 ln 6, so one admission
  // prices the slot at 35 and a reward of 40 still clears it.
  Instance inst = basic_single(1.0, 1, {{0, offer1(1.0, 1.0, 0, 1)}, {0, offer1(40.0, 1.0, 0, 1)}});
  inst.declared_bounds[0].density = {{1.0, 1.0}};
  inst.declared_bounds[0].duration = {{1.0, 1.0}};

  Trace strict = run_basic(inst);
  CHECK(strict.decisions[1].outcome == Outcome::admitted);
  bool capacity_issue = false;
  for (const AuditIssue& issue : strict.issues) capacity_issue |= issue.code == "CAPACITY";
  CHECK(capacity_issue);

  RunOptions guarded;
  guarded.guarded = true;
  Trace safe = run_basic(inst, guarded);
  CHECK(safe.decisions[1].outcome == Outcome::guarded_rejected);
  CHECK(safe.guarded_rejections == 1);
  for (const AuditIssue& issue : safe.issues) CHECK(issue.code != "CAPACITY");
  // The guarded dual keeps u_n = residual, so the certificate stays valid.
  CHECK(safe.utilities[1] == doctest::Approx(40.0 - 35.0).epsilon(1e-9));
  CHECK(verify_dual_certificate(inst, safe).ok());
}

TEST_CASE("random compliant instances satisfy every audited invariant") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.variant = Variant::basic;
    cfg.requests = 14;
    cfg.resources = 3;
    cfg.horizon = 16;
    cfg.density_bar = 4.0;
    cfg.d_bar = 3.0;
    const Instance inst = generate(cfg);
    REQUIRE(validate_instance(inst).feasible_for_guarantee());

    const Trace trace = run_basic(inst);
    CHECK(trace.issues.empty());
    CHECK(trace.dual >= trace.primal - 1e-9);
    if (trace.primal > 0.0) {
      const double bound =
          theoretical_cr_bound(effective_bounds(inst, fluctuation_stats(inst)), Variant::basic);
      CHECK(trace.dual / trace.primal <= bound + 1e-9);
    }
    CHECK(verify_dual_certificate(inst, trace).ok());

    // Complementary slackness: u > 0 only on assigned requests, and
    // admitted requests carry u = residual at admission.
    for (size_t n = 0; n < trace.decisions.size(); ++n) {
      if (trace.utilities[n] > 0.0) CHECK(trace.assignment[n].has_value());
      if (trace.decisions[n].outcome == Outcome::admitted)
        CHECK(trace.decisions[n].utility == trace.decisions[n].residual);
    }
  }
}

TEST_CASE("identical instances give identical traces") {
  GeneratorConfig cfg;
  cfg.seed = 99;
  cfg.variant = Variant::basic;
  cfg.requests = 20;
  cfg.resources = 2;
  cfg.horizon = 18;
  const Instance inst = generate(cfg);

  const Trace a = run_basic(inst);
  const Trace b = run_basic(inst);
  REQUIRE(a.decisions.size() == b.decisions.size());
  CHECK(a.primal == b.primal);
  CHECK(a.dual == b.dual);
  for (size_t i = 0; i < a.decisions.size(); ++i) {
    CHECK(a.decisions[i].outcome == b.decisions[i].outcome);
    CHECK(a.decisions[i].k_star == b.decisions[i].k_star);
    CHECK(a.decisions[i].residual == b.decisions[i].residual);
    CHECK(a.decisions[i].delta_d == b.decisions[i].delta_d);
  }
}
