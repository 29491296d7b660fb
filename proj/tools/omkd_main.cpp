#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "omkd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Online multiple-knapsack-with-departures primal-dual toolkit"};
  app.require_subcommand(1);

  // validate
  std::string v_path, v_check = "auto";
  CLI::App* validate = app.add_subcommand("validate", "Check A1-A3 and the guarantee weight cap");
  validate->add_option("instance", v_path, "Instance JSON")->required();
  validate->add_option("--check", v_check, "auto|none|basic|lb|md (default auto)");

  // gen
  omkd::cli::GenArgs gen_args;
  std::string g_variant, g_out;
  std::uint64_t g_seed = 0;
  int g_requests = 0, g_resources = 0, g_horizon = 0;
  double g_density_bar = 0, g_d_bar = 0, g_xi = 0;
  bool g_violating = false, g_adversarial = false;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random or adversarial instance");
  gen->add_option("--config", gen_args.config_path, "GeneratorConfig JSON file");
  CLI::Option* o_variant = gen->add_option("--variant", g_variant, "basic|lb|md");
  CLI::Option* o_seed = gen->add_option("--seed", g_seed, "RNG seed");
  CLI::Option* o_requests = gen->add_option("--requests", g_requests, "Request count");
  CLI::Option* o_resources = gen->add_option("--resources", g_resources, "Resource count");
  CLI::Option* o_horizon = gen->add_option("--horizon", g_horizon, "Time horizon");
  CLI::Option* o_density = gen->add_option("--density-bar", g_density_bar, "Density fluctuation target");
  CLI::Option* o_dbar = gen->add_option("--d-bar", g_d_bar, "Duration fluctuation target");
  CLI::Option* o_xi = gen->add_option("--xi", g_xi, "Total demand fluctuation target (md)");
  gen->add_flag("--violating", g_violating, "Draw weights past the guarantee cap");
  gen->add_flag("--adversarial", g_adversarial, "Density-ramp stress family");
  gen->add_option("--out", g_out, "Output path (default stdout)");

  // run
  omkd::cli::RunArgs run_args;
  std::string r_mode = "strict";
  CLI::App* run = app.add_subcommand("run", "Run an online algorithm over an instance");
  run->add_option("instance", run_args.instance_path, "Instance JSON")->required();
  run->add_option("--algo", run_args.algo, "basic|lb|md (default: instance variant)");
  run->add_option("--mode", r_mode, "strict|guarded (default strict)");
  run->add_flag("--oracle", run_args.with_oracle, "Also compute the offline optimum and CR");
  run->add_option("--oracle-cap", run_args.oracle_cap, "Oracle request cap (default 20)");
  run->add_option("--trace", run_args.trace_path, "Per-step CSV trace output path");
  run->add_option("--summary", run_args.summary_path, "Summary JSON output path");

  // oracle
  std::string or_path;
  int or_cap = 20;
  CLI::App* oracle = app.add_subcommand("oracle", "Exact offline optimum (desk scale)");
  oracle->add_option("instance", or_path, "Instance JSON")->required();
  oracle->add_option("--cap", or_cap, "Request cap (default 20)");

  // bench
  std::string b_config, b_out = "bench_out";
  CLI::App* bench = app.add_subcommand("bench", "Sweep generator grids and chart CR vs bound");
  bench->add_option("config", b_config, "Sweep config JSON")->required();
  bench->add_option("--out", b_out, "Output directory (default bench_out)");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    return omkd::cli::cli_validate(v_path, v_check, std::cout, std::cerr);
  }
  if (gen->parsed()) {
    gen_args.out_path = g_out;
    gen_args.adversarial = g_adversarial;
    if (o_variant->count()) gen_args.variant = g_variant;
    if (o_seed->count()) gen_args.seed = g_seed;
    if (o_requests->count()) gen_args.requests = g_requests;
    if (o_resources->count()) gen_args.resources = g_resources;
    if (o_horizon->count()) gen_args.horizon = g_horizon;
    if (o_density->count()) gen_args.density_bar = g_density_bar;
    if (o_dbar->count()) gen_args.d_bar = g_d_bar;
    if (o_xi->count()) gen_args.xi = g_xi;
    if (g_violating) gen_args.violating = true;
    return omkd::cli::cli_gen(gen_args, std::cout, std::cerr);
  }
  if (run->parsed()) {
    if (r_mode != "strict" && r_mode != "guarded") {
      std::cerr << "error: unknown mode '" << r_mode << "'\n";
      return omkd::cli::kSemanticError;
    }
    run_args.guarded = r_mode == "guarded";
    return omkd::cli::cli_run(run_args, std::cout, std::cerr);
  }
  if (oracle->parsed()) {
    return omkd::cli::cli_oracle(or_path, or_cap, std::cout, std::cerr);
  }
  if (bench->parsed()) {
    return omkd::cli::cli_bench(b_config, b_out, std::cout, std::cerr);
  }
  return omkd::cli::kSemanticError;
}
