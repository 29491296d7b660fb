#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "omkd/algo_basic.hpp"
#include "omkd/algo_lb.hpp"
#include "omkd/algo_md.hpp"
#include "omkd/generate.hpp"
#include "omkd/oracle.hpp"
#include "omkd/validate.hpp"
#include "support/builders.hpp"
#include "support/enumeration.hpp"

using namespace omkd;
using namespace omkd::testing;

TEST_CASE("the blocking long request is left to the offline optimum") {
  // C = 1; n0 wants both slots for reward 1, n1 wants slot 0 for 10.
  Instance inst = basic_single(1.0, 2, {{0, offer1(1.0, 1.0, 0, 2)}, {0, offer1(10.0, 1.0, 0, 1)}});
  const OfflineSolution sol = exact_optimum(inst);
  CHECK(sol.value == doctest::Approx(10.0));
  CHECK(sol.assignment[0] == -1);
  CHECK(sol.assignment[1] == 0);
}

TEST_CASE("empty instance optimum is zero") {
  Instance inst;
  inst.variant = Variant::basic;
  inst.horizon = 2;
  Resource res;
  res.id = 0;
  res.capacities = {1.0};
  inst.resources.push_back(res);
  inst.check_structure();
  CHECK(exact_optimum(inst).value == 0.0);
}

TEST_CASE("non-overlapping requests with ample capacity all fit") {
  Instance inst = basic_single(100.0, 9,
                               {{0, offer1(2.0, 1.0, 0, 2)},
                                {1, offer1(5.0, 1.0, 3, 2)},
                                {2, offer1(1.5, 1.0, 6, 2)}});
  CHECK(exact_optimum(inst).value == doctest::Approx(8.5));
}

TEST_CASE("the size cap is enforced") {
  std::vector<std::pair<int, Offer>> offers;
  for (int i = 0; i < 5; ++i) offers.push_back({0, offer1(1.0, 0.1, 0, 1)});
  Instance inst = basic_single(10.0, 2, offers);
  CHECK_THROWS_AS(exact_optimum(inst, 4), size_cap_error);
  CHECK_NOTHROW(exact_optimum(inst, 5));
}

TEST_CASE("branch-and-bound equals pure enumeration across variants") {
  TestRng rng(5);
  for (int trial = 0; trial < 45; ++trial) {
    GeneratorConfig cfg;
    cfg.seed = 1000 + trial;
    cfg.variant = trial % 3 == 0 ? Variant::basic : (trial % 3 == 1 ? Variant::lb : Variant::md);
    cfg.requests = rng.uniform_int(2, 8);
    cfg.resources = rng.uniform_int(1, 3);
    cfg.horizon = 10;
    cfg.dims_range = {1, 2};
    cfg.xi_target = 2.0;
    cfg.q_range = {1, 2};
    cfg.capacity_range = {2.0, 6.0};
    // Mix compliant and violating draws so capacities actually bind.
    cfg.violate_guarantee = trial % 2 == 0;
    const Instance inst = generate(cfg);

    const OfflineSolution bnb = exact_optimum(inst);
    const EnumeratedOptimum brute = exhaustive_optimum(inst);
    CHECK(bnb.value == doctest::Approx(brute.value).epsilon(1e-9));
  }
}

TEST_CASE("certificates from strict runs verify, corrupted ones do not") {
  GeneratorConfig cfg;
  cfg.seed = 77;
  cfg.variant = Variant::basic;
  cfg.requests = 10;
  cfg.resources = 2;
  cfg.horizon = 12;
  const Instance inst = generate(cfg);
  Trace trace = run_basic(inst);
  CHECK(verify_dual_certificate(inst, trace).ok());

  // Hand-corrupted certificate: zero out the utilities of admitted
  // requests while keeping the prices; their dual constraints must fail.
  bool any_admitted = false;
  for (size_t n = 0; n < trace.utilities.size(); ++n) {
    if (trace.assignment[n]) {
      trace.utilities[n] = 0.0;
      any_admitted = true;
    }
  }
  REQUIRE(any_admitted);
  CHECK_FALSE(verify_dual_certificate(inst, trace).ok());
}

TEST_CASE("empty traces verify trivially") {
  Instance inst;
  inst.variant = Variant::basic;
  inst.horizon = 2;
  Resource res;
  res.id = 0;
  res.capacities = {1.0};
  inst.resources.push_back(res);
  inst.check_structure();
  const Trace trace = run_basic(inst);
  CHECK(verify_dual_certificate(inst, trace, 0.0).ok());
}

TEST_CASE("empirical competitive ratio conventions") {
  CHECK(empirical_cr(5.0, 10.0) == doctest::Approx(2.0));
  CHECK(empirical_cr(7.0, 7.0) == doctest::Approx(1.0));
  CHECK(empirical_cr(0.0, 0.0) == 1.0);
  CHECK(empirical_cr(0.0, 3.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("theoretical bound values and monotonicity") {
  ResourceBounds flat;
  flat.defined = true;
  flat.density_bar = 1.0;
  flat.d_bar = 1.0;
  flat.xi_max = 1.0;
  CHECK(theoretical_cr_bound({flat}, Variant::basic) ==
        doctest::Approx(10.339850002884624).epsilon(1e-12));

  ResourceBounds md = flat;
  md.density_bar = 2.0;
  md.d_bar = 2.0;
  md.xi_max = 3.0;
  CHECK(theoretical_cr_bound({md}, Variant::md) ==
        doctest::Approx(22.575424759098897).epsilon(1e-12));

  ResourceBounds bigger = flat;
  bigger.density_bar = 2.0;
  CHECK(theoretical_cr_bound({bigger}, Variant::basic) >
        theoretical_cr_bound({flat}, Variant::basic));
}

TEST_CASE("online P <= offline optimum <= D on validated instances") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.variant = seed % 3 == 0 ? Variant::basic : (seed % 3 == 1 ? Variant::lb : Variant::md);
    cfg.requests = 9;
    cfg.resources = 2;
    cfg.horizon = seed % 3 == 1 ? 30 : 12;
    cfg.dims_range = {1, 2};
    cfg.xi_target = 2.0;
    const Instance inst = generate(cfg);
    REQUIRE(validate_instance(inst).feasible_for_guarantee());

    Trace trace = [&] {
      switch (inst.variant) {
        case Variant::basic: return run_basic(inst);
        case Variant::lb: return run_lb(inst);
        default: return run_md(inst);
      }
    }();
    const OfflineSolution sol = exact_optimum(inst);
    CHECK(trace.primal <= sol.value + 1e-9 * std::max(1.0, sol.value));
    CHECK(sol.value <= trace.dual + 1e-6 * std::max(1.0, trace.dual));
    CHECK(verify_dual_certificate(inst, trace, sol.value).ok());
    CHECK(empirical_cr(trace, sol) <=
          theoretical_cr_bound(effective_bounds(inst, fluctuation_stats(inst)), inst.variant) +
              1e-9);
  }
}
