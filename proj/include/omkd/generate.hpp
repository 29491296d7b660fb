#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "omkd/instance.hpp"

namespace omkd {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  Variant variant = Variant::basic;
  int resources = 2;
  int requests = 20;
  int horizon = 24;
  std::array<double, 2> capacity_range = {8.0, 16.0};

  // Fluctuation targets; realized values never exceed them and the
  // declared bounds are set to them, so A1/A2 hold by construction.
  double density_bar = 4.0;   // theta-bar or rho-bar target, >= 1
  double density_min = 1.0;   // lower density anchor
  double d_bar = 3.0;         // duration fluctuation target, >= 1
  int d_min = 1;              // shortest duration
  double xi_target = 1.0;     // md: total demand fluctuation target

  std::array<int, 2> dims_range = {2, 3};        // md: dimensions per resource
  std::array<int, 2> batch_size_range = {1, 4};  // lb
  std::array<int, 2> q_range = {1, 3};           // lb

  double offer_prob = 0.7;  // chance a request targets each resource
  bool violate_guarantee = false;  // draw weights up to C instead of the guarantee cap
};

GeneratorConfig generator_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const GeneratorConfig& cfg);

/// Deterministic in the seed. In cap-compliant mode every weight is
/// at most C ln2 / gamma (divided by q_k for lb, per dimension for md),
/// so the generated instance passes validate_instance for the matching
/// guarantee. Violating mode forces one weight to the full capacity.
Instance generate(const GeneratorConfig& cfg);

/// Basic-variant stress family: overlapping low-density long requests
/// first, then high-density short requests crowding the long requests'
/// last slot. Realized theta-bar and d-bar hit the targets exactly.
Instance adversarial_density_ramp(const GeneratorConfig& cfg);

}  // namespace omkd
