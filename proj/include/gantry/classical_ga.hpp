#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gantry/error.hpp"
#include "gantry/fitness.hpp"
#include "gantry/parallel.hpp"
#include "gantry/repair.hpp"
#include "gantry/rng.hpp"
#include "gantry/schedule.hpp"

namespace gantry {

struct GaParams {
  double r_s = 0.83;  // surviving ratio
  double r_c = 0.27;  // crossover ratio
  double r_m = 0.37;  // mutation ratio
  double r_r = 0.85;  // repair ratio
  int n_ini = 10;
  int n_max = 150;
  int g_max = 200;
  std::uint64_t seed = 0;

  void validate() const {
    const std::pair<const char*, double> ratios[] = {{"r_s", r_s}, {"r_c", r_c}, {"r_m", r_m}, {"r_r", r_r}};
    for (const auto& [name, v] : ratios)
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]", name);
    if (n_ini < 2) throw ConfigError("N_ini must be >= 2", "N_ini");
    if (n_max < 2) throw ConfigError("N_max must be >= 2", "N_max");
    if (g_max < 0) throw ConfigError("G_max must be >= 0", "G_max");
  }

  friend bool operator==(const GaParams&, const GaParams&) = default;
};

/// Medium instance presets.
inline GaParams classical_medium_params() { return {}; }
inline GaParams quantum_medium_params() {
  GaParams p;
  p.n_max = 50;
  return p;
}
inline ProblemSpec medium_problem() { return {3, 12, 108}; }

/// Large instance presets.
inline GaParams classical_large_params() {
  GaParams p;
  p.r_c = 0.37;
  p.n_ini = 40;
  p.n_max = 250;
  return p;
}
inline GaParams quantum_large_params() {
  GaParams p = classical_large_params();
  p.n_ini = 10;
  p.n_max = 70;
  return p;
}
inline ProblemSpec large_problem() { return {3, 72, 650}; }

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;  // best of the evaluated population
  int population = 0;         // size after selection

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

struct RunResult {
  std::vector<GenerationRecord> records;
  Chromosome best_schedule;
  FitnessBreakdown best_fitness;
  double elapsed_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

inline std::size_t survivor_count(std::size_t population, double r_s, int n_max) {
  const auto ranked = static_cast<std::size_t>(std::floor(r_s * static_cast<double>(population)));
  return std::min({static_cast<std::size_t>(n_max), std::max<std::size_t>(2, ranked), population});
}

/// Indices of the survivors, best first; ties keep the lower index.
inline std::vector<std::size_t> ranking_order(std::span<const double> fitness, double r_s, int n_max) {
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  order.resize(survivor_count(fitness.size(), r_s, n_max));
  return order;
}

/// Ranking selection over (individual, fitness) pairs.
template <typename Individual>
std::vector<std::pair<Individual, double>> select(std::vector<std::pair<Individual, double>> pop, double r_s,
                                                   int n_max) {
  std::vector<double> fitness;
  fitness.reserve(pop.size());
  for (const auto& entry : pop) fitness.push_back(entry.second);
  std::vector<std::pair<Individual, double>> survivors;
  for (std::size_t i : ranking_order(fitness, r_s, n_max)) survivors.push_back(std::move(pop[i]));
  return survivors;
}

// ---------------------------------------------------------------------------
// Crossover
// ---------------------------------------------------------------------------

namespace detail {

template <typename Cells>
void check_crossing_point(const Cells& a, const Cells& b, std::size_t point) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover parents differ in shape");
  if (point < 1 || point >= a.size()) throw std::out_of_range("crossing point outside [1, n_g*n_t - 1]");
}

}  // namespace detail

/// Swaps the flattened tails at `point`.
inline std::pair<Chromosome, Chromosome> single_point_crossover(const Chromosome& a, const Chromosome& b,
                                                                std::size_t point) {
  if (a.spec() != b.spec()) throw std::invalid_argument("crossover parents differ in shape");
  detail::check_crossing_point(a.cells(), b.cells(), point);
  Chromosome c1 = a;
  Chromosome c2 = b;
  std::swap_ranges(c1.cells().begin() + static_cast<std::ptrdiff_t>(point), c1.cells().end(),
                   c2.cells().begin() + static_cast<std::ptrdiff_t>(point));
  return {std::move(c1), std::move(c2)};
}

inline std::size_t crossover_pair_count(std::size_t population, double r_c) {
  return static_cast<std::size_t>(std::floor(r_c * static_cast<double>(population) / 2.0));
}

/// Draws `count` distinct indices from [0, n) by partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Stream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(count);
  return idx;
}

/// Pairs floor(r_c*N/2) disjoint parents and appends their two children.
/// `cross` maps (a, b, point) to the child pair; `cell_count` is the
/// flattened length shared by every individual.
template <typename Individual, typename Cross>
void crossover_step(std::vector<Individual>& pop, double r_c, std::size_t cell_count, Stream& rng, Cross&& cross) {
  const std::size_t pairs = crossover_pair_count(pop.size(), r_c);
  if (pairs == 0 || cell_count < 2) return;
  const std::vector<std::size_t> parents = sample_without_replacement(pop.size(), 2 * pairs, rng);
  pop.reserve(pop.size() + 2 * pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t point = 1 + rng.below(cell_count - 1);
    auto [c1, c2] = cross(pop[parents[2 * k]], pop[parents[2 * k + 1]], point);
    pop.push_back(std::move(c1));
    pop.push_back(std::move(c2));
  }
}

inline void crossover_step(std::vector<Chromosome>& pop, double r_c, Stream& rng) {
  if (pop.empty()) return;
  crossover_step(pop, r_c, pop.front().spec().cell_count(), rng,
                 [](const Chromosome& a, const Chromosome& b, std::size_t point) {
                   return single_point_crossover(a, b, point);
                 });
}

// ---------------------------------------------------------------------------
// Mutation
// ---------------------------------------------------------------------------

/// Picks a non-idle cell uniformly and gives it a random patient, rewriting
/// the whole same-status run around it. No-op on an all-idle schedule.
inline void mutate_patient_ids(Chromosome& chrom, Stream& rng) {
  const ProblemSpec& spec = chrom.spec();
  std::vector<std::size_t> working;
  const auto cells = chrom.cells();
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!cells[i].is_idle()) working.push_back(i);
  if (working.empty()) return;

  const std::size_t flat = working[rng.below(working.size())];
  const auto patient = static_cast<PatientId>(rng.below(static_cast<std::uint64_t>(spec.n_p)));
  const int g = static_cast<int>(flat / static_cast<std::size_t>(spec.n_t));
  const int t = static_cast<int>(flat % static_cast<std::size_t>(spec.n_t));

  std::span<SlotCell> track = chrom.track(g);
  const Status status = track[t].status;
  int lo = t;
  int hi = t;
  while (lo > 0 && track[lo - 1].status == status) --lo;
  while (hi + 1 < spec.n_t && track[hi + 1].status == status) ++hi;
  for (int k = lo; k <= hi; ++k) track[k].patient = patient;
}

/// Stamps a random status over a random cell and the following duration-1
/// cells of its track, keeping the chosen cell's patient.
inline void mutate_statuses(Chromosome& chrom, Stream& rng) {
  const ProblemSpec& spec = chrom.spec();
  const std::size_t flat = rng.below(spec.cell_count());
  const Status s = status_from_index(rng.below(kStatusCount));
  const int g = static_cast<int>(flat / static_cast<std::size_t>(spec.n_t));
  const int t = static_cast<int>(flat % static_cast<std::size_t>(spec.n_t));

  std::span<SlotCell> track = chrom.track(g);
  PatientId patient = track[t].patient;
  if (!is_working(s)) {
    patient = kVacant;
  } else if (patient == kVacant) {
    // An idle cell turning busy needs somebody to treat.
    patient = static_cast<PatientId>(rng.below(static_cast<std::uint64_t>(spec.n_p)));
  }
  const int end = std::min(spec.n_t, t + status_duration(s));
  for (int k = t; k < end; ++k) track[k] = SlotCell{s, patient};
}

// ---------------------------------------------------------------------------
// Generation loop
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_run_inputs(const ProblemSpec& spec, const GaParams& params, const ScoreTable& table) {
  spec.validate();
  params.validate();
  table.validate();
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Keeps only the survivors, in ranking order.
template <typename Individual>
void apply_selection(std::vector<Individual>& pop, std::vector<double>& fitness, const GaParams& params) {
  const std::vector<std::size_t> order = ranking_order(fitness, params.r_s, params.n_max);
  std::vector<Individual> next;
  std::vector<double> next_fitness;
  next.reserve(order.size());
  next_fitness.reserve(order.size());
  for (std::size_t i : order) {
    next.push_back(std::move(pop[i]));
    next_fitness.push_back(fitness[i]);
  }
  pop = std::move(next);
  fitness = std::move(next_fitness);
}

inline std::size_t ratio_count(double ratio, std::size_t population) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(population)));
}

}  // namespace detail

/// Runs the classical algorithm. Each generation: evaluate and record,
/// select, crossover, ID mutation, status mutation, repair; then one final
/// evaluation. Per-chromosome work is spread over `threads` workers and
/// every unit draws from its own substream, so results do not depend on the
/// worker count.
inline RunResult run_classical(const ProblemSpec& spec, const GaParams& params, const ScoreTable& table = {},
                               unsigned threads = 1) {
  detail::validate_run_inputs(spec, params, table);
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t seed = params.seed;

  std::vector<Chromosome> pop(static_cast<std::size_t>(params.n_ini));
  parallel_for(pop.size(), threads, [&](std::size_t i) {
    Stream rng = Stream::substream(seed, 0, Phase::init, i);
    pop[i] = random_chromosome(spec, rng);
  });

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(params.g_max) + 1);
  std::optional<std::pair<Chromosome, FitnessBreakdown>> best;

  for (int gen = 0; gen <= params.g_max; ++gen) {
    const auto generation = static_cast<std::uint64_t>(gen);

    std::vector<FitnessBreakdown> scores(pop.size());
    parallel_for(pop.size(), threads, [&](std::size_t i) { scores[i] = evaluate_breakdown(pop[i], table); });

    std::vector<double> fitness(pop.size());
    std::size_t top = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      fitness[i] = scores[i].total;
      if (fitness[i] > fitness[top]) top = i;
    }
    if (!best || fitness[top] > best->second.total) best.emplace(pop[top], scores[top]);

    detail::apply_selection(pop, fitness, params);
    result.records.push_back({gen, fitness.front(), static_cast<int>(pop.size())});
    if (gen == params.g_max) break;

    Stream pairing = Stream::substream(seed, generation, Phase::pairing, 0);
    crossover_step(pop, params.r_c, pairing);

    const std::size_t n = pop.size();
    Stream pick_id = Stream::substream(seed, generation, Phase::select_id_mutation, 0);
    const auto id_targets = sample_without_replacement(n, detail::ratio_count(params.r_m, n), pick_id);
    parallel_for(id_targets.size(), threads, [&](std::size_t k) {
      Stream rng = Stream::substream(seed, generation, Phase::id_mutation, id_targets[k]);
      mutate_patient_ids(pop[id_targets[k]], rng);
    });

    Stream pick_status = Stream::substream(seed, generation, Phase::select_status_mutation, 0);
    const auto status_targets = sample_without_replacement(n, detail::ratio_count(params.r_m, n), pick_status);
    parallel_for(status_targets.size(), threads, [&](std::size_t k) {
      Stream rng = Stream::substream(seed, generation, Phase::status_mutation, status_targets[k]);
      mutate_statuses(pop[status_targets[k]], rng);
    });

    Stream pick_repair = Stream::substream(seed, generation, Phase::select_repair, 0);
    const auto repair_targets = sample_without_replacement(n, detail::ratio_count(params.r_r, n), pick_repair);
    parallel_for(repair_targets.size(), threads,
                 [&](std::size_t k) { pop[repair_targets[k]] = repair_chromosome(pop[repair_targets[k]]); });
  }

  result.best_schedule = std::move(best->first);
  result.best_fitness = best->second;
  result.elapsed_seconds = detail::seconds_since(started);
  return result;
}

}  // namespace gantry
