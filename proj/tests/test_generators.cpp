#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "omkd/algo_basic.hpp"
#include "omkd/generate.hpp"
#include "omkd/oracle.hpp"
#include "omkd/validate.hpp"
#include "support/enumeration.hpp"

using namespace omkd;
using namespace omkd::testing;

TEST_CASE("generation is deterministic in the seed") {
  GeneratorConfig cfg;
  cfg.seed = 4242;
  cfg.variant = Variant::md;
  cfg.requests = 15;
  cfg.resources = 3;
  cfg.dims_range = {1, 3};
  cfg.xi_target = 2.0;
  const std::string a = to_json(generate(cfg)).dump();
  const std::string b = to_json(generate(cfg)).dump();
  CHECK(a == b);

  cfg.seed = 4243;
  CHECK(to_json(generate(cfg)).dump() != a);
}

TEST_CASE("cap-compliant instances pass validation in every variant") {
  for (Variant variant : {Variant::basic, Variant::lb, Variant::md}) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      GeneratorConfig cfg;
      cfg.seed = seed;
      cfg.variant = variant;
      cfg.requests = 12;
      cfg.resources = 3;
      cfg.horizon = 30;
      cfg.dims_range = {1, 3};
      cfg.xi_target = 2.0;
      cfg.density_bar = 5.0;
      cfg.d_bar = 3.0;
      const Instance inst = generate(cfg);
      const ValidationReport report = validate_instance(inst);
      CHECK(report.feasible_for_guarantee());
    }
  }
}

TEST_CASE("violating mode plants a weight at the full capacity") {
  GeneratorConfig cfg;
  cfg.seed = 9;
  cfg.variant = Variant::basic;
  cfg.requests = 6;
  cfg.violate_guarantee = true;
  const Instance inst = generate(cfg);
  const ValidationReport report = validate_instance(inst);
  REQUIRE_FALSE(report.feasible_for_guarantee());
  bool cites = false;
  for (const Violation& v : report.violations) cites |= v.code == "WEIGHT_CAP";
  CHECK(cites);
}

TEST_CASE("realized fluctuations never exceed the targets") {
  for (std::uint64_t seed = 20; seed < 40; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.variant = seed % 2 == 0 ? Variant::basic : Variant::md;
    cfg.requests = 20;
    cfg.resources = 2;
    cfg.horizon = 24;
    cfg.density_bar = 6.0;
    cfg.d_bar = 4.0;
    cfg.dims_range = {2, 3};
    cfg.xi_target = 2.5;
    const Instance inst = generate(cfg);
    const FluctuationStats stats = fluctuation_stats(inst);
    for (const ResourceStats& rs : stats.per_resource) {
      if (!rs.defined) continue;
      CHECK(rs.density_bar <= cfg.density_bar * (1 + 1e-9));
      CHECK(rs.d_bar <= cfg.d_bar * (1 + 1e-9));
      if (cfg.variant == Variant::md) CHECK(rs.xi_max <= cfg.xi_target * (1 + 1e-9));
    }
  }
}

TEST_CASE("the density ramp hits its fluctuation targets exactly") {
  GeneratorConfig cfg;
  cfg.seed = 3;
  cfg.variant = Variant::basic;
  cfg.requests = 10;
  cfg.horizon = 12;
  cfg.density_bar = 4.0;
  cfg.d_bar = 3.0;
  const Instance inst = adversarial_density_ramp(cfg);
  const FluctuationStats stats = fluctuation_stats(inst);
  REQUIRE(stats.per_resource[0].defined);
  CHECK(stats.per_resource[0].density_bar == 4.0);
  CHECK(stats.per_resource[0].d_bar == 3.0);
  CHECK(validate_instance(inst).feasible_for_guarantee());
}

TEST_CASE("a one-request ramp degenerates to a plain instance") {
  GeneratorConfig cfg;
  cfg.seed = 3;
  cfg.variant = Variant::basic;
  cfg.requests = 1;
  const Instance inst = adversarial_density_ramp(cfg);
  CHECK(inst.num_requests() == 1);
  CHECK_NOTHROW(inst.check_structure());
}

TEST_CASE("the ramp costs the online algorithm reward at high density spread") {
  GeneratorConfig cfg;
  cfg.seed = 12;
  cfg.variant = Variant::basic;
  cfg.requests = 12;
  cfg.horizon = 12;
  cfg.density_bar = 64.0;
  cfg.d_bar = 4.0;
  cfg.capacity_range = {4.0, 4.0};
  const Instance inst = adversarial_density_ramp(cfg);

  const Trace trace = run_basic(inst);
  const OfflineSolution sol = exact_optimum(inst);
  CHECK(trace.primal < sol.value);
  CHECK(trace.issues.empty());
}

TEST_CASE("infeasible configs are rejected") {
  GeneratorConfig cfg;
  cfg.d_bar = 0.5;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);

  GeneratorConfig tight;
  tight.horizon = 2;
  tight.d_bar = 8.0;
  CHECK_THROWS_AS(generate(tight), std::invalid_argument);

  GeneratorConfig lb_ramp;
  lb_ramp.variant = Variant::lb;
  CHECK_THROWS_AS(adversarial_density_ramp(lb_ramp), std::invalid_argument);
}

TEST_CASE("generator configs round-trip through JSON") {
  GeneratorConfig cfg;
  cfg.seed = 17;
  cfg.variant = Variant::lb;
  cfg.requests = 31;
  cfg.q_range = {2, 4};
  const GeneratorConfig back = generator_config_from_json(to_json(cfg));
  CHECK(back.seed == cfg.seed);
  CHECK(back.variant == cfg.variant);
  CHECK(back.requests == cfg.requests);
  CHECK(back.q_range == cfg.q_range);
  CHECK(to_json(back).dump() == to_json(cfg).dump());
}
