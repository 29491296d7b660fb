#include "omkd/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "omkd/algo_basic.hpp"
#include "omkd/algo_lb.hpp"
#include "omkd/algo_md.hpp"
#include "omkd/generate.hpp"
#include "omkd/oracle.hpp"
#include "omkd/validate.hpp"

namespace omkd::cli {

namespace {

using nlohmann::json;

/// Full-precision, locale-independent double formatting for CSV output.
std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Trace dispatch_run(const Instance& inst, const RunOptions& opt) {
  switch (inst.variant) {
    case Variant::basic: return run_basic(inst, opt);
    case Variant::lb: return run_lb(inst, opt);
    case Variant::md: return run_md(inst, opt);
  }
  throw std::logic_error("unknown variant");
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "step,request_id,outcome,k_star,residual,dP,dD,running_P,running_D\n";
  double running_p = 0.0, running_d = 0.0;
  for (size_t i = 0; i < trace.decisions.size(); ++i) {
    const Decision& d = trace.decisions[i];
    running_p += d.delta_p;
    running_d += d.delta_d;
    os << i << ',' << d.request << ',' << to_string(d.outcome) << ',' << d.k_star << ','
       << g17(d.residual) << ',' << g17(d.delta_p) << ',' << g17(d.delta_d) << ','
       << g17(running_p) << ',' << g17(running_d) << '\n';
  }
}

}  // namespace

nlohmann::ordered_json to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["instance"] = s.instance;
  j["variant"] = s.variant;
  j["algo"] = s.algo;
  j["mode"] = s.mode;
  j["requests"] = s.requests;
  j["online_P"] = s.online_p;
  j["dual_D"] = s.dual_d;
  if (s.offline_opt) j["offline_opt"] = *s.offline_opt;
  if (s.empirical_cr) j["empirical_cr"] = *s.empirical_cr;
  j["theoretical_bound"] = s.theoretical_bound;
  j["max_step_ratio"] = s.max_step_ratio;
  j["violations"] = s.violations;
  j["guarded_rejections"] = s.guarded_rejections;
  j["wall_ms"] = s.wall_ms;
  return j;
}

int cli_validate(const std::string& path, const std::string& check, std::ostream& out,
                 std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  GuaranteeCheck mode = GuaranteeCheck::auto_variant;
  if (check == "none") mode = GuaranteeCheck::none;
  else if (check == "basic") mode = GuaranteeCheck::basic;
  else if (check == "lb") mode = GuaranteeCheck::lb;
  else if (check == "md") mode = GuaranteeCheck::md;
  else if (check != "auto") {
    err << "error: unknown guarantee check '" << check << "'\n";
    return kSemanticError;
  }
  try {
    const ValidationReport report = validate_instance(inst, mode);
    out << format_report(report);
    return report.feasible_for_guarantee() ? kOk : kSemanticError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  }
}

int cli_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  GeneratorConfig cfg;
  try {
    if (!args.config_path.empty()) {
      std::ifstream in(args.config_path);
      if (!in) throw std::runtime_error("cannot open config file: " + args.config_path);
      cfg = generator_config_from_json(json::parse(in));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  if (args.variant) cfg.variant = variant_from_string(*args.variant);
  if (args.seed) cfg.seed = *args.seed;
  if (args.requests) cfg.requests = *args.requests;
  if (args.resources) cfg.resources = *args.resources;
  if (args.horizon) cfg.horizon = *args.horizon;
  if (args.density_bar) cfg.density_bar = *args.density_bar;
  if (args.d_bar) cfg.d_bar = *args.d_bar;
  if (args.xi) cfg.xi_target = *args.xi;
  if (args.violating) cfg.violate_guarantee = *args.violating;

  try {
    const Instance inst = args.adversarial ? adversarial_density_ramp(cfg) : generate(cfg);
    if (args.out_path.empty()) {
      out << to_json(inst).dump(2) << "\n";
    } else {
      save_instance(inst, args.out_path);
      out << "wrote " << args.out_path << " (" << inst.num_requests() << " requests)\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  }
}

int cli_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(args.instance_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  const std::string algo = args.algo.empty() ? to_string(inst.variant) : args.algo;
  if (algo != to_string(inst.variant)) {
    err << "error: instance variant is '" << to_string(inst.variant) << "' but --algo says '"
        << algo << "'\n";
    return kSemanticError;
  }

  RunOptions opt;
  opt.guarded = args.guarded;

  try {
    const auto start = std::chrono::steady_clock::now();
    const Trace trace = dispatch_run(inst, opt);
    const auto stop = std::chrono::steady_clock::now();

    RunSummary summary;
    summary.instance = args.instance_path;
    summary.variant = to_string(inst.variant);
    summary.algo = algo;
    summary.mode = args.guarded ? "guarded" : "strict";
    summary.requests = inst.num_requests();
    summary.online_p = trace.primal;
    summary.dual_d = trace.dual;
    summary.max_step_ratio = trace.max_step_ratio;
    summary.guarded_rejections = trace.guarded_rejections;
    summary.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();

    const FluctuationStats stats = fluctuation_stats(inst);
    const std::vector<ResourceBounds> bounds = effective_bounds(inst, stats);
    summary.theoretical_bound = theoretical_cr_bound(bounds, inst.variant);

    std::optional<double> offline;
    if (args.with_oracle) {
      const OfflineSolution sol = exact_optimum(inst, args.oracle_cap);
      offline = sol.value;
      summary.offline_opt = sol.value;
      summary.empirical_cr = empirical_cr(trace, sol);
    }
    const CertificateReport cert = verify_dual_certificate(inst, trace, offline);
    summary.violations = static_cast<int>(trace.issues.size() + cert.violations.size());

    if (!args.trace_path.empty()) {
      std::ofstream tf(args.trace_path);
      if (!tf) {
        err << "error: cannot write trace file: " << args.trace_path << "\n";
        return kIoError;
      }
      write_trace_csv(tf, trace);
    }
    const nlohmann::ordered_json j = to_json(summary);
    out << j.dump(2) << "\n";
    if (!args.summary_path.empty()) {
      std::ofstream sf(args.summary_path);
      if (!sf) {
        err << "error: cannot write summary file: " << args.summary_path << "\n";
        return kIoError;
      }
      sf << j.dump(2) << "\n";
    }
    return kOk;
  } catch (const size_cap_error& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  }
}

int cli_oracle(const std::string& path, int cap, std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  try {
    const OfflineSolution sol = exact_optimum(inst, cap);
    nlohmann::ordered_json j;
    j["value"] = sol.value;
    j["assignment"] = sol.assignment;
    j["nodes_explored"] = sol.nodes_explored;
    j["method"] = sol.method;
    out << j.dump(2) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  }
}

int cli_bench(const std::string& config_path, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  json config;
  try {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open bench config: " + config_path);
    config = json::parse(in);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  try {
    const Variant variant = variant_from_string(config.value("variant", "basic"));
    const int reps = config.value("reps", 10);
    const std::uint64_t base_seed = config.value("seed", std::uint64_t{1});
    const int oracle_cap = config.value("oracle_cap", 12);
    GeneratorConfig base;
    if (config.contains("generator")) base = generator_config_from_json(config.at("generator"));
    base.variant = variant;
    if (!config.contains("grid") || config.at("grid").empty())
      throw std::invalid_argument("bench config needs a nonempty grid");

    std::ostringstream csv;
    csv << "variant,density_bar,d_bar,xi,reps,mean_cr,max_cr,bound,mean_online,mean_offline,"
           "violations\n";
    int grid_index = 0;
    for (const json& point : config.at("grid")) {
      GeneratorConfig cfg = base;
      cfg.density_bar = point.value("density_bar", base.density_bar);
      cfg.d_bar = point.value("d_bar", base.d_bar);
      cfg.xi_target = point.value("xi", base.xi_target);

      double cr_sum = 0.0, cr_max = 0.0, online_sum = 0.0, offline_sum = 0.0, bound = 0.0;
      long long violations = 0;
      for (int rep = 0; rep < reps; ++rep) {
        cfg.seed = base_seed + static_cast<std::uint64_t>(grid_index) * 100003 +
                   static_cast<std::uint64_t>(rep);
        const Instance inst = generate(cfg);
        const Trace trace = dispatch_run(inst, RunOptions{});
        const OfflineSolution sol = exact_optimum(inst, oracle_cap);
        const double cr = empirical_cr(trace, sol);
        cr_sum += cr;
        cr_max = std::max(cr_max, cr);
        online_sum += trace.primal;
        offline_sum += sol.value;
        violations += static_cast<long long>(trace.issues.size());
        if (rep == 0) {
          bound = theoretical_cr_bound(effective_bounds(inst, fluctuation_stats(inst)),
                                       inst.variant);
        }
      }
      csv << to_string(variant) << ',' << g17(cfg.density_bar) << ',' << g17(cfg.d_bar) << ','
          << g17(cfg.xi_target) << ',' << reps << ',' << g17(cr_sum / reps) << ',' << g17(cr_max)
          << ',' << g17(bound) << ',' << g17(online_sum / reps) << ',' << g17(offline_sum / reps)
          << ',' << violations << '\n';
      ++grid_index;
    }

    std::filesystem::create_directories(out_dir);
    const std::string csv_path = (std::filesystem::path(out_dir) / "bench.csv").string();
    std::ofstream cf(csv_path);
    if (!cf) {
      err << "error: cannot write " << csv_path << "\n";
      return kIoError;
    }
    cf << csv.str();
    out << csv.str();
    out << "wrote " << csv_path << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  }
}

}  // namespace omkd::cli
