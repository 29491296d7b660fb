#include "omkd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace omkd {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Variant v) {
  switch (v) {
    case Variant::basic: return "basic";
    case Variant::lb: return "lb";
    case Variant::md: return "md";
  }
  throw std::logic_error("unknown variant");
}

Variant variant_from_string(const std::string& s) {
  if (s == "basic") return Variant::basic;
  if (s == "lb") return Variant::lb;
  if (s == "md") return Variant::md;
  throw std::invalid_argument("unknown variant tag: " + s);
}

std::map<int, std::vector<int>> Instance::batches() const {
  std::map<int, std::vector<int>> by_time;
  for (int n = 0; n < num_requests(); ++n) {
    by_time[requests[n].arrival].push_back(n);
  }
  return by_time;
}

namespace {

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void Instance::check_structure() const {
  if (horizon <= 0) fail("horizon must be positive");

  for (int k = 0; k < num_resources(); ++k) {
    const Resource& res = resources[k];
    if (res.id != k) fail("resource ids must be the 0-based list positions");
    if (res.capacities.empty()) fail("resource " + std::to_string(k) + " has no dimensions");
    if (variant != Variant::md && res.dims() != 1)
      fail("single-dimension variants require exactly one capacity per resource");
    for (double c : res.capacities) {
      if (!(std::isfinite(c) && c > 0.0))
        fail("capacity of resource " + std::to_string(k) + " must be > 0");
    }
    if (variant == Variant::lb) {
      if (!res.batch_cap) fail("load-balancing variant requires q for every resource");
      if (*res.batch_cap < 1) fail("q of resource " + std::to_string(k) + " must be >= 1");
    } else if (res.batch_cap) {
      fail("q is only valid in the load-balancing variant");
    }
  }

  std::set<int> ids;
  int prev_arrival = -1, prev_id = -1;
  for (const Request& req : requests) {
    if (req.id < 0 || req.id >= num_requests() || !ids.insert(req.id).second)
      fail("request ids must be unique 0-based indices");
    if (req.arrival < 0 || req.arrival >= horizon)
      fail("request " + std::to_string(req.id) + " arrives outside the horizon");
    if (req.arrival < prev_arrival || (req.arrival == prev_arrival && req.id < prev_id))
      fail("requests must be sorted by (arrival, id)");
    prev_arrival = req.arrival;
    prev_id = req.id;
    if (req.offers.empty()) fail("request " + std::to_string(req.id) + " has no offers");
    for (const auto& [k, offer] : req.offers) {
      const std::string where =
          "offer (" + std::to_string(req.id) + ", " + std::to_string(k) + ")";
      if (k < 0 || k >= num_resources()) fail(where + ": unknown resource");
      const int dims = resources[k].dims();
      if (offer.dims() != dims || static_cast<int>(offer.starts.size()) != dims ||
          static_cast<int>(offer.durations.size()) != dims)
        fail(where + ": w/s/d must all have one entry per resource dimension");
      if (!finite_nonneg(offer.reward)) fail(where + ": reward must be finite and >= 0");
      for (int m = 0; m < dims; ++m) {
        if (!finite_nonneg(offer.weights[m])) fail(where + ": weights must be finite and >= 0");
        if (offer.durations[m] < 1) fail(where + ": durations must be >= 1");
        if (offer.starts[m] < req.arrival) fail(where + ": service cannot start before arrival");
        if (offer.starts[m] + offer.durations[m] > horizon)
          fail(where + ": interval exceeds the horizon");
      }
    }
  }

  for (const auto& [k, b] : declared_bounds) {
    const std::string where = "declared bounds for resource " + std::to_string(k);
    if (k < 0 || k >= num_resources()) fail(where + ": unknown resource");
    if (b.density) {
      if (!((*b.density)[0] > 0.0 && (*b.density)[0] <= (*b.density)[1]))
        fail(where + ": density bounds need 0 < min <= max");
    }
    if (b.duration) {
      if (!((*b.duration)[0] >= 1.0 && (*b.duration)[0] <= (*b.duration)[1]))
        fail(where + ": duration bounds need 1 <= min <= max");
    }
    if (b.xi_max && *b.xi_max < 1.0) fail(where + ": xi_max must be >= 1");
  }
}

namespace {

std::array<double, 2> parse_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument(what + " must be [min, max]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Instance parse_instance(const json& j) {
  Instance inst;
  inst.horizon = j.at("horizon").get<int>();
  inst.variant = variant_from_string(j.at("variant").get<std::string>());

  for (const json& rj : j.at("resources")) {
    Resource res;
    res.id = rj.at("id").get<int>();
    res.capacities = rj.at("capacities").get<std::vector<double>>();
    if (rj.contains("q")) res.batch_cap = rj.at("q").get<int>();
    inst.resources.push_back(std::move(res));
  }

  for (const json& qj : j.at("requests")) {
    Request req;
    req.id = qj.at("id").get<int>();
    req.arrival = qj.at("arrival").get<int>();
    for (const auto& [key, oj] : qj.at("offers").items()) {
      Offer offer;
      offer.reward = oj.at("v").get<double>();
      offer.weights = oj.at("w").get<std::vector<double>>();
      offer.starts = oj.at("s").get<std::vector<int>>();
      offer.durations = oj.at("d").get<std::vector<int>>();
      req.offers.emplace(std::stoi(key), std::move(offer));
    }
    inst.requests.push_back(std::move(req));
  }

  if (j.contains("declared_bounds")) {
    for (const auto& [key, bj] : j.at("declared_bounds").items()) {
      DeclaredBounds b;
      if (bj.contains("theta")) b.density = parse_pair(bj.at("theta"), "theta");
      if (bj.contains("rho")) {
        if (b.density) throw std::invalid_argument("give either theta or rho bounds, not both");
        b.density = parse_pair(bj.at("rho"), "rho");
      }
      if (bj.contains("d")) b.duration = parse_pair(bj.at("d"), "d");
      if (bj.contains("xi")) b.xi_max = bj.at("xi").get<double>();
      inst.declared_bounds.emplace(std::stoi(key), b);
    }
  }

  std::stable_sort(inst.requests.begin(), inst.requests.end(),
                   [](const Request& a, const Request& b) {
                     return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
                   });
  inst.check_structure();
  return inst;
}

nlohmann::ordered_json to_json(const Instance& inst) {
  ordered_json j;
  j["horizon"] = inst.horizon;
  j["variant"] = to_string(inst.variant);

  j["resources"] = ordered_json::array();
  for (const Resource& res : inst.resources) {
    ordered_json rj;
    rj["id"] = res.id;
    rj["capacities"] = res.capacities;
    if (res.batch_cap) rj["q"] = *res.batch_cap;
    j["resources"].push_back(std::move(rj));
  }

  j["requests"] = ordered_json::array();
  for (const Request& req : inst.requests) {
    ordered_json qj;
    qj["id"] = req.id;
    qj["arrival"] = req.arrival;
    ordered_json offers = ordered_json::object();
    for (const auto& [k, offer] : req.offers) {
      ordered_json oj;
      oj["v"] = offer.reward;
      oj["w"] = offer.weights;
      oj["s"] = offer.starts;
      oj["d"] = offer.durations;
      offers[std::to_string(k)] = std::move(oj);
    }
    qj["offers"] = std::move(offers);
    j["requests"].push_back(std::move(qj));
  }

  if (!inst.declared_bounds.empty()) {
    ordered_json bounds = ordered_json::object();
    for (const auto& [k, b] : inst.declared_bounds) {
      ordered_json bj = ordered_json::object();
      if (b.density) {
        const char* key = inst.variant == Variant::md ? "rho" : "theta";
        bj[key] = *b.density;
      }
      if (b.duration) bj["d"] = *b.duration;
      if (b.xi_max) bj["xi"] = *b.xi_max;
      bounds[std::to_string(k)] = std::move(bj);
    }
    j["declared_bounds"] = std::move(bounds);
  }
  return j;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j = json::parse(in);
  return parse_instance(j);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << to_json(inst).dump(2) << "\n";
}

}  // namespace omkd
