// gantry_sched: run, sweep and size the gantry scheduling optimizers.
//
//   gantry_sched run    --config PATH [--algo classical|quantum] [--seed U64] [--threads N] [--out DIR]
//   gantry_sched sweep  --config PATH --grid PATH [--algo ...] [--seed U64] [--threads N] [--out DIR]
//   gantry_sched qubits --N 70 --nt 650 --ng 3 --np 72 [--ns 8]
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gantry/cli.hpp"

int main(int argc, char** argv) {
  using namespace gantry;

  CLI::App app{"Daily multi-gantry patient scheduling with classical and quantum-inspired genetic algorithms"};
  app.require_subcommand(1);

  const std::map<std::string, Algorithm> algorithms{{"classical", Algorithm::classical},
                                                    {"quantum", Algorithm::quantum}};

  cli::RunCommand run;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "Run one optimization and write curves.csv, best_schedule.json, summary.json");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--algo", run.algorithm, "classical | quantum")
      ->transform(CLI::CheckedTransformer(algorithms, CLI::ignore_case));
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--threads", run.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_out, "Output directory (overrides out_dir in the config)");

  cli::SweepCommand sweep;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep; writes sweep.csv and sweep_summary.csv");
  sweep_cmd->add_option("--config", sweep.config, "Experiment config (JSON)")->required();
  sweep_cmd->add_option("--grid", sweep.grid, "Sweep grid (JSON)")->required();
  sweep_cmd->add_option("--algo", sweep.algorithm, "classical | quantum")
      ->transform(CLI::CheckedTransformer(algorithms, CLI::ignore_case));
  sweep_cmd->add_option("--seed", sweep.master_seed, "Master seed; grid point i uses a derived seed");
  sweep_cmd->add_option("--threads", sweep.threads, "Grid points run concurrently")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "Output directory (overrides out_dir in the config)");

  cli::QubitsCommand qubits;
  auto* qubits_cmd = app.add_subcommand("qubits", "Qubits needed to hold a population of quantum chromosomes");
  qubits_cmd->add_option("--N", qubits.population, "Population size")->required();
  qubits_cmd->add_option("--nt", qubits.n_t, "Time slots per gantry")->required();
  qubits_cmd->add_option("--ng", qubits.n_g, "Gantries")->required();
  qubits_cmd->add_option("--np", qubits.n_p, "Patients")->required();
  qubits_cmd->add_option("--ns", qubits.n_s, "Gantry statuses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }

  if (!run_out.empty()) run.out = run_out;
  if (!sweep_out.empty()) sweep.out = sweep_out;

  if (*run_cmd) return cli::cmd_run(run, std::cout, std::cerr);
  if (*sweep_cmd) return cli::cmd_sweep(sweep, std::cout, std::cerr);
  return cli::cmd_qubits(qubits, std::cout, std::cerr);
}
