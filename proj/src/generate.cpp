#include "omkd/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "omkd/pricing.hpp"

namespace omkd {

namespace {

/// Deterministic substream: every (seed, tag, sub) triple yields an
/// independent generator, so adding draws in one place never perturbs
/// the others.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t sub = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                      static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(sub >> 32)};
    rng_.seed(seq);
  }

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 rng_;
};

constexpr std::uint64_t kResourceTag = 1;
constexpr std::uint64_t kRequestTag = 2;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("infeasible generator config: " + what);
}

struct Targets {
  int d_max = 1;
  double density_lo = 1.0;
  double density_hi = 1.0;
  double xi = 1.0;
  double gamma = 0.0;  // from the declared bounds, as the algorithm sees them
};

Targets derive_targets(const GeneratorConfig& cfg) {
  Targets t;
  t.d_max = std::max(cfg.d_min, static_cast<int>(std::llround(cfg.d_bar * cfg.d_min)));
  t.density_lo = cfg.density_min;
  t.density_hi = cfg.density_min * cfg.density_bar;
  t.xi = cfg.xi_target;
  const double density_bar_decl = t.density_hi / t.density_lo;
  const double d_bar_decl = static_cast<double>(t.d_max) / cfg.d_min;
  t.gamma = cfg.variant == Variant::md ? gamma_md(density_bar_decl, d_bar_decl, t.xi)
                                       : gamma_basic(density_bar_decl, d_bar_decl);
  return t;
}

void check_common(const GeneratorConfig& cfg) {
  require(cfg.resources >= 1, "need at least one resource");
  require(cfg.requests >= 0, "negative request count");
  require(cfg.density_bar >= 1.0, "density fluctuation target must be >= 1");
  require(cfg.density_min > 0.0, "density anchor must be > 0");
  require(cfg.d_bar >= 1.0, "duration fluctuation target must be >= 1");
  require(cfg.d_min >= 1, "shortest duration must be >= 1");
  require(cfg.xi_target >= 1.0, "xi target must be >= 1");
  require(cfg.capacity_range[0] > 0.0 && cfg.capacity_range[0] <= cfg.capacity_range[1],
          "capacity range");
  require(cfg.offer_prob >= 0.0 && cfg.offer_prob <= 1.0, "offer probability");
}

DeclaredBounds declared_from(const GeneratorConfig& cfg, const Targets& t) {
  DeclaredBounds b;
  b.density = {{t.density_lo, t.density_hi}};
  b.duration = {{static_cast<double>(cfg.d_min), static_cast<double>(t.d_max)}};
  if (cfg.variant == Variant::md) b.xi_max = t.xi;
  return b;
}

}  // namespace

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  GeneratorConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("variant")) cfg.variant = variant_from_string(j.at("variant").get<std::string>());
  if (j.contains("resources")) cfg.resources = j.at("resources").get<int>();
  if (j.contains("requests")) cfg.requests = j.at("requests").get<int>();
  if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<int>();
  if (j.contains("capacity")) cfg.capacity_range = j.at("capacity").get<std::array<double, 2>>();
  if (j.contains("density_bar")) cfg.density_bar = j.at("density_bar").get<double>();
  if (j.contains("density_min")) cfg.density_min = j.at("density_min").get<double>();
  if (j.contains("d_bar")) cfg.d_bar = j.at("d_bar").get<double>();
  if (j.contains("d_min")) cfg.d_min = j.at("d_min").get<int>();
  if (j.contains("xi")) cfg.xi_target = j.at("xi").get<double>();
  if (j.contains("dims")) cfg.dims_range = j.at("dims").get<std::array<int, 2>>();
  if (j.contains("batch_size")) cfg.batch_size_range = j.at("batch_size").get<std::array<int, 2>>();
  if (j.contains("q")) cfg.q_range = j.at("q").get<std::array<int, 2>>();
  if (j.contains("offer_prob")) cfg.offer_prob = j.at("offer_prob").get<double>();
  if (j.contains("violate_guarantee")) cfg.violate_guarantee = j.at("violate_guarantee").get<bool>();
  return cfg;
}

nlohmann::ordered_json to_json(const GeneratorConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["variant"] = to_string(cfg.variant);
  j["resources"] = cfg.resources;
  j["requests"] = cfg.requests;
  j["horizon"] = cfg.horizon;
  j["capacity"] = cfg.capacity_range;
  j["density_bar"] = cfg.density_bar;
  j["density_min"] = cfg.density_min;
  j["d_bar"] = cfg.d_bar;
  j["d_min"] = cfg.d_min;
  j["xi"] = cfg.xi_target;
  j["dims"] = cfg.dims_range;
  j["batch_size"] = cfg.batch_size_range;
  j["q"] = cfg.q_range;
  j["offer_prob"] = cfg.offer_prob;
  j["violate_guarantee"] = cfg.violate_guarantee;
  return j;
}

Instance generate(const GeneratorConfig& cfg) {
  check_common(cfg);
  const Targets t = derive_targets(cfg);
  require(cfg.horizon > t.d_max, "horizon must exceed the longest duration");
  if (cfg.variant == Variant::md) {
    require(cfg.dims_range[0] >= 1 && cfg.dims_range[0] <= cfg.dims_range[1], "dims range");
  }
  if (cfg.variant == Variant::lb) {
    require(cfg.q_range[0] >= 1 && cfg.q_range[0] <= cfg.q_range[1], "q range");
    require(cfg.batch_size_range[0] >= 1 && cfg.batch_size_range[0] <= cfg.batch_size_range[1],
            "batch size range");
  }

  Instance inst;
  inst.variant = cfg.variant;
  inst.horizon = cfg.horizon;

  Stream res_stream(cfg.seed, kResourceTag);
  for (int k = 0; k < cfg.resources; ++k) {
    Resource res;
    res.id = k;
    const int dims =
        cfg.variant == Variant::md ? res_stream.uniform_int(cfg.dims_range[0], cfg.dims_range[1])
                                   : 1;
    for (int m = 0; m < dims; ++m)
      res.capacities.push_back(res_stream.uniform(cfg.capacity_range[0], cfg.capacity_range[1]));
    if (cfg.variant == Variant::lb)
      res.batch_cap = res_stream.uniform_int(cfg.q_range[0], cfg.q_range[1]);
    inst.resources.push_back(std::move(res));
    inst.declared_bounds.emplace(k, declared_from(cfg, t));
  }

  // lb: arrivals follow a batch schedule; otherwise arrivals are uniform.
  std::vector<int> arrivals(cfg.requests, 0);
  if (cfg.variant == Variant::lb) {
    Stream batch_stream(cfg.seed, kRequestTag, ~std::uint64_t{0});
    int n = 0, time = 0;
    while (n < cfg.requests) {
      require(time <= cfg.horizon - t.d_max - 1, "horizon too small for the batch schedule");
      int size = batch_stream.uniform_int(cfg.batch_size_range[0], cfg.batch_size_range[1]);
      for (; size > 0 && n < cfg.requests; --size) arrivals[n++] = time;
      ++time;
    }
  }

  const double ln2 = std::log(2.0);
  for (int n = 0; n < cfg.requests; ++n) {
    Stream rng(cfg.seed, kRequestTag, static_cast<std::uint64_t>(n));
    Request req;
    req.id = n;
    req.arrival = cfg.variant == Variant::lb
                      ? arrivals[n]
                      : rng.uniform_int(0, cfg.horizon - t.d_max - 1);

    std::vector<int> targets;
    for (int k = 0; k < cfg.resources; ++k) {
      if (rng.uniform() < cfg.offer_prob) targets.push_back(k);
    }
    if (targets.empty()) targets.push_back(rng.uniform_int(0, cfg.resources - 1));

    for (int k : targets) {
      const Resource& res = inst.resources[k];
      Offer offer;
      const int dims = res.dims();
      offer.weights.resize(dims, 0.0);
      offer.starts.resize(dims, req.arrival);
      offer.durations.resize(dims, cfg.d_min);
      for (int m = 0; m < dims; ++m) {
        offer.durations[m] = rng.uniform_int(cfg.d_min, t.d_max);
        offer.starts[m] = rng.uniform_int(req.arrival, cfg.horizon - offer.durations[m]);
      }

      // Weight shape first, then a scale that respects every dimension's
      // cap; xi <= target holds because the spread within one offer is at
      // most (xi - 1) / (positive dims - 1).
      const int positive = std::clamp(static_cast<int>(t.xi), 1, dims);
      const double spread = positive >= 2 ? (t.xi - 1.0) / (positive - 1) : 1.0;
      std::vector<int> order(dims);
      for (int m = 0; m < dims; ++m) order[m] = m;
      for (int m = dims - 1; m > 0; --m) std::swap(order[m], order[rng.uniform_int(0, m)]);

      std::vector<double> shape(dims, 0.0);
      double max_scale = std::numeric_limits<double>::infinity();
      for (int i = 0; i < positive; ++i) {
        const int m = order[i];
        shape[m] = spread > 1.0 ? rng.log_uniform(1.0, spread) : 1.0;
        double cap_w = res.capacities[m];
        if (!cfg.violate_guarantee) {
          cap_w = cap_w * ln2 / t.gamma;
          if (cfg.variant == Variant::lb) cap_w /= static_cast<double>(*res.batch_cap);
        }
        max_scale = std::min(max_scale, cap_w / shape[m]);
      }
      const double scale = max_scale * rng.log_uniform(0.02, 1.0);
      double consumed = 0.0;
      for (int m = 0; m < dims; ++m) {
        offer.weights[m] = shape[m] * scale;
        consumed += offer.weights[m] * offer.durations[m];
      }
      if (cfg.violate_guarantee && n == 0 && k == targets.front()) {
        // Pin one weight to the full capacity so the weight-cap check
        // is guaranteed to trip.
        offer.weights[0] = res.capacities[0];
        consumed = 0.0;
        for (int m = 0; m < dims; ++m) consumed += offer.weights[m] * offer.durations[m];
      }

      const double density = rng.log_uniform(t.density_lo, t.density_hi);
      offer.reward = density * consumed;
      req.offers.emplace(k, std::move(offer));
    }
    inst.requests.push_back(std::move(req));
  }

  std::stable_sort(inst.requests.begin(), inst.requests.end(),
                   [](const Request& a, const Request& b) {
                     return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
                   });
  inst.check_structure();
  return inst;
}

Instance adversarial_density_ramp(const GeneratorConfig& cfg) {
  if (cfg.variant != Variant::basic)
    throw std::invalid_argument("adversarial_density_ramp targets the basic variant");
  check_common(cfg);
  const Targets t = derive_targets(cfg);
  const int d_long = t.d_max;
  require(cfg.horizon >= d_long + cfg.d_min, "horizon too small for the ramp layout");
  require(cfg.requests >= 1, "ramp needs at least one request");

  Instance inst;
  inst.variant = Variant::basic;
  inst.horizon = cfg.horizon;

  Stream res_stream(cfg.seed, kResourceTag);
  Resource res;
  res.id = 0;
  res.capacities.push_back(res_stream.uniform(cfg.capacity_range[0], cfg.capacity_range[1]));
  inst.resources.push_back(res);
  inst.declared_bounds.emplace(0, declared_from(cfg, t));

  const double ln2 = std::log(2.0);
  double cap_w = res.capacities[0];
  if (!cfg.violate_guarantee) cap_w = cap_w * ln2 / t.gamma;

  const int n_long = std::max(1, cfg.requests / 2);
  const int t0 = d_long - 1;
  for (int n = 0; n < cfg.requests; ++n) {
    Stream rng(cfg.seed, kRequestTag, static_cast<std::uint64_t>(n));
    const bool is_long = n < n_long;
    Request req;
    req.id = n;
    req.arrival = is_long ? 0 : t0;
    Offer offer;
    offer.weights = {rng.log_uniform(cap_w * 0.25, cap_w)};
    offer.starts = {is_long ? 0 : t0};
    offer.durations = {is_long ? d_long : cfg.d_min};
    const double density = is_long ? t.density_lo : t.density_hi;
    offer.reward = density * offer.weights[0] * offer.durations[0];
    req.offers.emplace(0, std::move(offer));
    inst.requests.push_back(std::move(req));
  }
  inst.check_structure();
  return inst;
}

}  // namespace omkd
