#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

using namespace polyiter::cli;

int main(int argc, char** argv) {
  CLI::App app{"Policy iteration for zero-sum stochastic games"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("file", validate_file, "Instance JSON")->required();

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Run nested policy iteration");
  solve->add_option("file", solve_opts.file, "Instance JSON")->required();
  solve->add_option("--renewal-state", solve_opts.renewal_state, "Renewal state c (1-based), mean payoff only")
      ->check(CLI::PositiveNumber);
  solve->add_option("--start-policy", solve_opts.start_policy,
                    "\"first\" or a JSON file with min_policy (and optionally max_policy)");
  solve->add_option("--trace", solve_opts.trace_out, "Write the iteration trace to this file");
  solve->add_flag("--certify", solve_opts.certify, "Check the runtime certificates; exit 3 on violation");

  BoundOptions bound_opts;
  auto* bound = app.add_subcommand("bound", "Print the iteration bounds");
  bound->add_option("file", bound_opts.file, "Instance JSON")->required();
  auto* b_lambda = bound->add_option("--lambda", bound_opts.lambda, "Contraction factor");
  auto* b_spectral = bound->add_flag("--spectral", bound_opts.spectral, "Use the hull spectral radius");
  auto* b_return = bound->add_option("--return-times", bound_opts.return_times,
                                     "Use worst-case return times to state c (1-based)")
                       ->check(CLI::PositiveNumber);
  b_lambda->excludes(b_spectral)->excludes(b_return);
  b_spectral->excludes(b_return);

  TransformOptions tr_opts;
  auto* transform = app.add_subcommand("transform", "Emit a scaled or mean-reduced instance");
  transform->add_option("file", tr_opts.file, "Instance JSON")->required();
  auto* t_auto = transform->add_option("--scale-auto", tr_opts.scale_auto, "Scale by the Collatz-Wielandt vector at lambda");
  auto* t_phi = transform->add_option("--scale-phi", tr_opts.scale_phi, "Scale by the vector in this JSON file");
  auto* t_mean = transform->add_option("--mean", tr_opts.mean, "Mean-payoff reduction at renewal state c (1-based)")
                     ->check(CLI::PositiveNumber);
  t_auto->excludes(t_phi)->excludes(t_mean);
  t_phi->excludes(t_mean);
  transform->add_option("-o,--output", tr_opts.output, "Transformed instance path")->required();
  transform->add_option("--sidecar", tr_opts.sidecar, "Sidecar path (default: <output>.transform.json)");

  OracleOptions or_opts;
  auto* oracle = app.add_subcommand("oracle", "Brute-force enumeration baseline");
  oracle->add_option("file", or_opts.file, "Instance JSON")->required();
  oracle->add_option("--renewal-state", or_opts.renewal_state, "Renewal state c (1-based), mean payoff only")
      ->check(CLI::PositiveNumber);

  GenerateOptions gen_opts;
  auto* generate = app.add_subcommand("generate", "Write a random instance");
  generate->add_option("--family", gen_opts.family, "cap | discount | renewal")
      ->check(CLI::IsMember({"cap", "discount", "renewal"}));
  generate->add_option("--n", gen_opts.n, "Number of states")->check(CLI::PositiveNumber);
  generate->add_option("--a-max", gen_opts.a_max, "Max min-actions per state")->check(CLI::PositiveNumber);
  generate->add_option("--b-max", gen_opts.b_max, "Max max-actions per state")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen_opts.seed, "PRNG seed");
  generate->add_option("--lambda", gen_opts.lambda, "Row-sum cap (family cap)");
  generate->add_option("--rho-cap", gen_opts.rho_cap, "Spectral radius cap (family discount)");
  generate->add_option("--c", gen_opts.c, "Renewal state, 1-based (family renewal)")->check(CLI::PositiveNumber);
  generate->add_option("--p-min", gen_opts.p_min, "Minimum mass on the renewal state (family renewal)");
  generate->add_option("-o,--output", gen_opts.output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (validate->parsed()) return run_validate(validate_file);
  if (solve->parsed()) return run_solve(solve_opts);
  if (bound->parsed()) return run_bound(bound_opts);
  if (transform->parsed()) return run_transform(tr_opts);
  if (oracle->parsed()) return run_oracle(or_opts);
  if (generate->parsed()) return run_generate(gen_opts);
  return kUsage;
}
