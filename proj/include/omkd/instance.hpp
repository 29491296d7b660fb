#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace omkd {

enum class Variant { basic, lb, md };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// One request's terms for a single resource. `weights`, `starts` and
/// `durations` have one entry per dimension of that resource; the
/// single-dimension variants simply use length-1 vectors.
struct Offer {
  double reward = 0.0;          // v_nk
  std::vector<double> weights;  // w_nkm
  std::vector<int> starts;      // s_nkm, first occupied slot
  std::vector<int> durations;   // d_nkm, number of occupied slots, >= 1

  int dims() const { return static_cast<int>(weights.size()); }
  // Occupied interval of dimension m: [starts[m], starts[m] + durations[m])
};

struct Resource {
  int id = 0;
  std::vector<double> capacities;  // C_km, one per dimension
  std::optional<int> batch_cap;    // q_k, load-balancing variant only

  int dims() const { return static_cast<int>(capacities.size()); }
};

struct Request {
  int id = 0;
  int arrival = 0;             // a_n
  std::map<int, Offer> offers; // resource id -> offer; missing = ineligible
};

/// A1/A2 setup information supplied with an instance. Each bound is
/// optional; anything absent is reconstructed from the realized offers.
struct DeclaredBounds {
  std::optional<std::array<double, 2>> density;   // [theta_min, theta_max] or [rho_min, rho_max]
  std::optional<std::array<double, 2>> duration;  // [d_min, d_max]
  std::optional<double> xi_max;                   // multi-dimensional variant only
};

struct Instance {
  int horizon = 0;  // slots are 0 .. horizon-1
  Variant variant = Variant::basic;
  std::vector<Resource> resources;
  std::vector<Request> requests;  // sorted by (arrival, id)
  std::map<int, DeclaredBounds> declared_bounds;  // resource id -> bounds

  int num_resources() const { return static_cast<int>(resources.size()); }
  int num_requests() const { return static_cast<int>(requests.size()); }

  /// Batches N_i keyed by arrival time (nonempty ones only).
  std::map<int, std::vector<int>> batches() const;

  /// Throws std::invalid_argument on any structural invariant break
  /// (ids, horizon containment, dimension mismatches, sign constraints).
  void check_structure() const;
};

Instance parse_instance(const nlohmann::json& j);
nlohmann::ordered_json to_json(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace omkd
