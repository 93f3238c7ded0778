#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gantry/error.hpp"
#include "gantry/io.hpp"
#include "gantry/parallel.hpp"
#include "gantry/quantum_ga.hpp"
#include "gantry/sweep.hpp"

namespace gantry::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3 };

struct RunCommand {
  std::filesystem::path config;
  Algorithm algorithm = Algorithm::classical;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  std::optional<std::filesystem::path> out;  // overrides the config's out_dir
};

struct SweepCommand {
  std::filesystem::path config;
  std::filesystem::path grid;
  Algorithm algorithm = Algorithm::classical;
  std::uint64_t master_seed = 0;
  unsigned threads = default_threads();
  std::optional<std::filesystem::path> out;
};

struct QubitsCommand {
  std::int64_t population = 0;
  std::int64_t n_t = 0;
  std::int64_t n_g = 0;
  std::int64_t n_p = 0;
  std::int64_t n_s = static_cast<std::int64_t>(kStatusCount);
};

namespace detail {

inline std::filesystem::path output_dir(const std::optional<std::filesystem::path>& flag, const io::RunConfig& cfg) {
  std::filesystem::path dir = flag ? *flag : std::filesystem::path(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void report_config_error(std::ostream& err, const ConfigError& e) {
  err << "configuration error";
  if (!e.field().empty()) err << " [" << e.field() << "]";
  err << ": " << e.what() << '\n';
}

}  // namespace detail

/// Writes curves.csv, best_schedule.json and summary.json. The first two
/// depend only on (config, algorithm, seed).
inline int cmd_run(const RunCommand& cmd, std::ostream& out, std::ostream& err) {
  io::RunConfig cfg;
  GaParams params;
  try {
    cfg = io::load_run_config(cmd.config);
    params = cfg.params(cmd.algorithm);
    params.seed = cmd.seed;
  } catch (const ConfigError& e) {
    detail::report_config_error(err, e);
    return kConfigError;
  } catch (const std::exception& e) {
    detail::report_config_error(err, ConfigError(e.what()));
    return kConfigError;
  }

  try {
    const RunResult result = run_algorithm(cmd.algorithm, cfg.problem, params, cfg.scores, cmd.threads);
    const std::filesystem::path dir = detail::output_dir(cmd.out, cfg);

    io::json summary{{"algorithm", std::string(algorithm_name(cmd.algorithm))},
                     {"seed", cmd.seed},
                     {"best_fitness", result.best_fitness.total},
                     {"elapsed_seconds", result.elapsed_seconds},
                     {"generations", params.g_max},
                     {"N_max", params.n_max},
                     {"problem", io::to_json(cfg.problem)},
                     {"params", io::to_json(params)},
                     {"scores", io::to_json(cfg.scores)}};

    const std::string curves = io::curves_csv(result.records);
    const std::string schedule = io::schedule_to_json(result.best_schedule, result.best_fitness, cfg.scores).dump(1);
    io::write_file_atomic(dir / "curves.csv", curves);
    io::write_file_atomic(dir / "best_schedule.json", schedule + '\n');
    io::write_file_atomic(dir / "summary.json", summary.dump(2) + '\n');

    out << algorithm_name(cmd.algorithm) << " best fitness " << io::format_exact(result.best_fitness.total) << " in "
        << result.elapsed_seconds << " s; wrote " << dir.string() << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    detail::report_config_error(err, e);
    return kConfigError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

/// Runs every grid point, drops excluded values, writes sweep.csv and
/// sweep_summary.csv. Succeeds when at least one point succeeded.
inline int cmd_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err) {
  io::RunConfig cfg;
  io::GridFile grid;
  std::vector<GaParams> points;
  try {
    cfg = io::load_run_config(cmd.config);
    grid = io::load_grid_file(cmd.grid);
    points = build_grid(SweepGrid{cfg.params(cmd.algorithm), grid.axes});
  } catch (const ConfigError& e) {
    detail::report_config_error(err, e);
    return kConfigError;
  } catch (const std::exception& e) {
    detail::report_config_error(err, ConfigError(e.what()));
    return kConfigError;
  }

  try {
    std::vector<SweepRecord> records =
        run_sweep(cfg.problem, points, cfg.scores, cmd.algorithm, cmd.master_seed, cmd.threads);
    FilterResult filtered = filter_records(std::move(records), grid.exclusions);
    const std::filesystem::path dir = detail::output_dir(cmd.out, cfg);

    std::size_t failures = 0;
    for (const SweepRecord& r : filtered.kept)
      if (!r.ok()) {
        ++failures;
        err << r.error << '\n';
      }
    const bool any_ok = failures < filtered.kept.size();

    io::write_file_atomic(dir / "sweep.csv", io::sweep_csv(filtered.kept));
    if (any_ok) io::write_file_atomic(dir / "sweep_summary.csv", io::sweep_summary_csv(summarize(filtered.kept, grid.top_k)));

    out << points.size() << " grid points, " << filtered.removed << " excluded, " << failures << " failed; wrote "
        << dir.string() << '\n';
    return any_ok ? kOk : kRuntimeError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

inline int cmd_qubits(const QubitsCommand& cmd, std::ostream& out, std::ostream& err) {
  const std::pair<const char*, std::int64_t> args[] = {
      {"--N", cmd.population}, {"--nt", cmd.n_t}, {"--ng", cmd.n_g}, {"--np", cmd.n_p}, {"--ns", cmd.n_s}};
  for (const auto& [flag, value] : args)
    if (value < 1) {
      err << "configuration error: " << flag << " must be a positive integer\n";
      return kConfigError;
    }
  try {
    out << qubit_estimate(static_cast<std::uint64_t>(cmd.population), static_cast<std::uint64_t>(cmd.n_t),
                          static_cast<std::uint64_t>(cmd.n_g), static_cast<std::uint64_t>(cmd.n_p),
                          static_cast<std::uint64_t>(cmd.n_s))
        << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace gantry::cli
