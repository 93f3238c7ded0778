#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gantry/classical_ga.hpp"
#include "gantry/error.hpp"
#include "gantry/parallel.hpp"
#include "gantry/quantum_ga.hpp"

namespace gantry {

enum class Algorithm { classical, quantum };

constexpr std::string_view algorithm_name(Algorithm a) noexcept {
  return a == Algorithm::classical ? "classical" : "quantum";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  if (name == "classical") return Algorithm::classical;
  if (name == "quantum") return Algorithm::quantum;
  return std::nullopt;
}

/// The four swept ratios.
enum class Ratio { r_s, r_c, r_m, r_r };

inline constexpr Ratio kAllRatios[] = {Ratio::r_s, Ratio::r_c, Ratio::r_m, Ratio::r_r};

constexpr std::string_view ratio_name(Ratio r) noexcept {
  switch (r) {
    case Ratio::r_s: return "r_s";
    case Ratio::r_c: return "r_c";
    case Ratio::r_m: return "r_m";
    case Ratio::r_r: return "r_r";
  }
  return "";
}

inline std::optional<Ratio> parse_ratio(std::string_view name) noexcept {
  for (Ratio r : kAllRatios)
    if (ratio_name(r) == name) return r;
  if (name == "r_T") return Ratio::r_r;  // alternate spelling of the repair ratio
  return std::nullopt;
}

inline double& ratio_ref(GaParams& p, Ratio r) noexcept {
  switch (r) {
    case Ratio::r_s: return p.r_s;
    case Ratio::r_c: return p.r_c;
    case Ratio::r_m: return p.r_m;
    case Ratio::r_r: break;
  }
  return p.r_r;
}

inline double ratio_value(const GaParams& p, Ratio r) noexcept { return ratio_ref(const_cast<GaParams&>(p), r); }

inline double round2(double v) noexcept { return std::round(v * 100.0) / 100.0; }

struct SweepAxis {
  Ratio ratio = Ratio::r_c;
  double center = 0.0;
  double half_width = 0.0;
  double step = 0.02;

  /// center - half_width .. center + half_width inclusive, rounded to 2 decimals.
  std::vector<double> values() const {
    const auto steps = static_cast<int>(std::floor(2.0 * half_width / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) out.push_back(round2(center - half_width + i * step));
    return out;
  }

  void validate() const {
    const std::string name(ratio_name(ratio));
    if (!(step > 0.0)) throw ConfigError("sweep step must be > 0 for " + name, name);
    if (!(half_width >= 0.0)) throw ConfigError("sweep half-width must be >= 0 for " + name, name);
    if (round2(center - half_width) < 0.0 || round2(center + half_width) > 1.0)
      throw ConfigError("sweep range for " + name + " leaves [0, 1]", name);
  }
};

/// Axes to sweep; everything else comes from `base`.
struct SweepGrid {
  GaParams base;
  std::vector<SweepAxis> axes;
};

/// Cartesian product of the axes, first axis varying slowest.
inline std::vector<GaParams> build_grid(const SweepGrid& grid) {
  if (grid.axes.empty()) throw ConfigError("sweep grid has no axes", "axes");
  for (std::size_t i = 0; i < grid.axes.size(); ++i) {
    grid.axes[i].validate();
    for (std::size_t j = 0; j < i; ++j)
      if (grid.axes[j].ratio == grid.axes[i].ratio)
        throw ConfigError("ratio swept twice: " + std::string(ratio_name(grid.axes[i].ratio)), "axes");
  }

  std::vector<GaParams> points{grid.base};
  for (const SweepAxis& axis : grid.axes) {
    const std::vector<double> values = axis.values();
    std::vector<GaParams> next;
    next.reserve(points.size() * values.size());
    for (const GaParams& p : points)
      for (double v : values) {
        GaParams q = p;
        ratio_ref(q, axis.ratio) = v;
        next.push_back(q);
      }
    points = std::move(next);
  }
  return points;
}

struct SweepRecord {
  std::size_t point = 0;
  GaParams params;
  Algorithm algorithm = Algorithm::classical;
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  double run_seconds = 0.0;
  std::string error;  // empty when the run succeeded

  bool ok() const noexcept { return error.empty(); }
};

inline std::uint64_t sweep_point_seed(std::uint64_t master_seed, std::size_t point) noexcept {
  return mix_key(master_seed, static_cast<std::uint64_t>(Phase::sweep_point), point);
}

inline RunResult run_algorithm(Algorithm algorithm, const ProblemSpec& spec, const GaParams& params,
                               const ScoreTable& table, unsigned threads = 1) {
  return algorithm == Algorithm::classical ? run_classical(spec, params, table, threads)
                                           : run_quantum(spec, params, table, threads);
}

/// One single-threaded run per grid point; points run concurrently. A
/// failing point is recorded with its error instead of aborting the sweep.
inline std::vector<SweepRecord> run_sweep(const ProblemSpec& spec, const std::vector<GaParams>& points,
                                          const ScoreTable& table, Algorithm algorithm, std::uint64_t master_seed,
                                          unsigned threads = 1) {
  if (points.empty()) throw ConfigError("sweep grid is empty", "axes");
  std::vector<SweepRecord> records(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    SweepRecord& rec = records[i];
    rec.point = i;
    rec.params = points[i];
    rec.params.seed = rec.seed = sweep_point_seed(master_seed, i);
    rec.algorithm = algorithm;
    const auto started = std::chrono::steady_clock::now();
    try {
      rec.best_fitness = run_algorithm(algorithm, spec, rec.params, table, 1).best_fitness.total;
    } catch (const std::exception& e) {
      rec.error = "point " + std::to_string(i) + ": " + e.what();
    }
    rec.run_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  });
  return records;
}

/// Records whose ratio equals any listed value (to 2 decimals) are dropped.
struct Exclusion {
  Ratio ratio = Ratio::r_c;
  std::vector<double> values;
};

struct FilterResult {
  std::vector<SweepRecord> kept;
  std::size_t removed = 0;
};

inline FilterResult filter_records(std::vector<SweepRecord> records, const std::vector<Exclusion>& exclusions) {
  FilterResult out;
  for (SweepRecord& rec : records) {
    const bool excluded = std::any_of(exclusions.begin(), exclusions.end(), [&](const Exclusion& ex) {
      const double v = round2(ratio_value(rec.params, ex.ratio));
      return std::any_of(ex.values.begin(), ex.values.end(), [&](double x) { return std::abs(v - round2(x)) < 5e-4; });
    });
    if (excluded)
      ++out.removed;
    else
      out.kept.push_back(std::move(rec));
  }
  return out;
}

/// count / mean / max / min / population standard deviation.
struct Stats {
  std::size_t count = 0;
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  double stddev = 0.0;
};

inline Stats describe(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("statistics of an empty sample");
  Stats s;
  s.count = xs.size();
  s.max = *std::max_element(xs.begin(), xs.end());
  s.min = *std::min_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

struct SweepSummary {
  Stats fitness;
  Stats run_seconds;
  Stats top_fitness;
  Stats top_run_seconds;
  std::size_t top_k = 10;
};

/// Overall statistics plus the same over the k best records by fitness.
/// Failed records are ignored.
inline SweepSummary summarize(const std::vector<SweepRecord>& records, std::size_t k = 10) {
  std::vector<const SweepRecord*> ok;
  for (const SweepRecord& r : records)
    if (r.ok()) ok.push_back(&r);
  if (ok.empty()) throw std::invalid_argument("no successful sweep records to summarize");

  // Sorting first makes every sum order-independent of the input order.
  std::stable_sort(ok.begin(), ok.end(), [](const SweepRecord* a, const SweepRecord* b) {
    if (a->best_fitness != b->best_fitness) return a->best_fitness > b->best_fitness;
    return a->run_seconds < b->run_seconds;
  });

  auto column = [](auto first, auto last, auto field) {
    std::vector<double> xs;
    for (auto it = first; it != last; ++it) xs.push_back((*it)->*field);
    return xs;
  };
  const auto top_end = ok.begin() + static_cast<std::ptrdiff_t>(std::min(k, ok.size()));

  SweepSummary s;
  s.top_k = k;
  s.fitness = describe(column(ok.begin(), ok.end(), &SweepRecord::best_fitness));
  s.run_seconds = describe(column(ok.begin(), ok.end(), &SweepRecord::run_seconds));
  s.top_fitness = describe(column(ok.begin(), top_end, &SweepRecord::best_fitness));
  s.top_run_seconds = describe(column(ok.begin(), top_end, &SweepRecord::run_seconds));
  return s;
}

}  // namespace gantry
