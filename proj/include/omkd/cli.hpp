#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "omkd/instance.hpp"

namespace omkd::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kSemanticError = 1;  // violations, mismatches, size caps
inline constexpr int kIoError = 2;        // unreadable files, malformed JSON

struct RunSummary {
  std::string instance;
  std::string variant;
  std::string algo;
  std::string mode;
  int requests = 0;
  double online_p = 0.0;
  double dual_d = 0.0;
  std::optional<double> offline_opt;
  std::optional<double> empirical_cr;
  double theoretical_bound = 0.0;
  double max_step_ratio = 0.0;
  int violations = 0;
  int guarded_rejections = 0;
  double wall_ms = 0.0;
};

nlohmann::ordered_json to_json(const RunSummary& s);

struct RunArgs {
  std::string instance_path;
  std::string algo;             // empty = match the instance variant
  bool guarded = false;
  bool with_oracle = false;
  int oracle_cap = 20;
  std::string trace_path;       // per-step CSV, empty = skip
  std::string summary_path;     // summary JSON, empty = stdout only
};

struct GenArgs {
  std::string config_path;      // optional full GeneratorConfig JSON
  std::string out_path;         // empty = stdout
  bool adversarial = false;
  // Quick overrides, applied on top of the config file / defaults.
  std::optional<std::string> variant;
  std::optional<std::uint64_t> seed;
  std::optional<int> requests;
  std::optional<int> resources;
  std::optional<int> horizon;
  std::optional<double> density_bar;
  std::optional<double> d_bar;
  std::optional<double> xi;
  std::optional<bool> violating;
};

int cli_validate(const std::string& path, const std::string& check, std::ostream& out,
                 std::ostream& err);
int cli_gen(const GenArgs& args, std::ostream& out, std::ostream& err);
int cli_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cli_oracle(const std::string& path, int cap, std::ostream& out, std::ostream& err);
int cli_bench(const std::string& config_path, const std::string& out_dir, std::ostream& out,
              std::ostream& err);

}  // namespace omkd::cli
