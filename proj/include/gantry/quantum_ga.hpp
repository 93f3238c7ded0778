#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gantry/classical_ga.hpp"
#include "gantry/fitness.hpp"
#include "gantry/parallel.hpp"
#include "gantry/repair.hpp"
#include "gantry/rng.hpp"
#include "gantry/schedule.hpp"

namespace gantry {

// ---------------------------------------------------------------------------
// Amplitude vectors
// ---------------------------------------------------------------------------

/// Largest amplitude amplification will produce; keeps 1% escape probability.
inline const double kAmplitudeCap = std::sqrt(0.99);
inline constexpr double kAmplitudeFloor = 0.5;  // sqrt(1/4)
inline constexpr double kAmplificationFactor = 10.0;

inline double squared_norm(std::span<const double> v) noexcept {
  double sum = 0.0;
  for (double a : v) sum += a * a;
  return sum;
}

/// Smallest j whose cumulative probability reaches u. Cumulative rounding
/// that leaves the total just under u falls back to the last nonzero entry.
inline std::size_t sample_index(std::span<const double> v, double u) noexcept {
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] == 0.0) continue;
    cumulative += v[j] * v[j];
    last_nonzero = j;
    if (cumulative >= u) return j;
  }
  return last_nonzero;
}

/// Raises |v[target]| tenfold, to at least 1/2 and at most sqrt(0.99), then
/// shrinks the other entries proportionally so the vector stays unit-norm.
/// The result is rebuilt from the target's new weight, so rounding does not
/// accumulate across repeated calls.
inline void amplify(std::span<double> v, std::size_t target) {
  if (target >= v.size()) throw std::out_of_range("amplify target outside vector");
  const double current = std::abs(v[target]);
  if (current >= kAmplitudeCap) return;

  const double boosted = std::min(std::max(kAmplificationFactor * current, kAmplitudeFloor), kAmplitudeCap);
  const double residual = 1.0 - boosted * boosted;

  double others = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != target) others += v[i] * v[i];

  if (others > 0.0) {
    const double scale = std::sqrt(residual / others);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (i != target) v[i] *= scale;
  } else {
    const double share = std::sqrt(residual / static_cast<double>(v.size() - 1));
    for (std::size_t i = 0; i < v.size(); ++i)
      if (i != target) v[i] = share;
  }
  v[target] = std::signbit(v[target]) ? -boosted : boosted;
}

inline std::vector<double> amplify(std::vector<double> v, std::size_t target) {
  amplify(std::span<double>(v), target);
  return v;
}

// ---------------------------------------------------------------------------
// Quantum chromosome
// ---------------------------------------------------------------------------

/// n_g x n_t grid of qudit cells. Each cell holds a real superposition over
/// patient IDs (n_p amplitudes) and over the 8 statuses. Amplitudes are
/// stored in two flat arrays, cell-major, track-major.
class QuantumChromosome {
 public:
  QuantumChromosome() = default;

  /// Uniform superposition in every cell.
  explicit QuantumChromosome(const ProblemSpec& spec)
      : spec_(checked(spec)),
        ids_(spec.cell_count() * static_cast<std::size_t>(spec.n_p), 1.0 / std::sqrt(static_cast<double>(spec.n_p))),
        statuses_(spec.cell_count() * kStatusCount, 1.0 / std::sqrt(static_cast<double>(kStatusCount))) {}

  /// Basis states encoding a classical schedule. Idle cells get patient 0.
  static QuantumChromosome from_schedule(const Chromosome& chrom) {
    QuantumChromosome q(chrom.spec());
    std::fill(q.ids_.begin(), q.ids_.end(), 0.0);
    std::fill(q.statuses_.begin(), q.statuses_.end(), 0.0);
    for (std::size_t c = 0; c < q.cell_count(); ++c) {
      const SlotCell& cell = chrom.cells()[c];
      q.id_state(c)[cell.has_patient() ? static_cast<std::size_t>(cell.patient) : 0] = 1.0;
      q.status_state(c)[index_of(cell.status)] = 1.0;
    }
    return q;
  }

  const ProblemSpec& spec() const noexcept { return spec_; }
  std::size_t cell_count() const noexcept { return spec_.cell_count(); }

  std::span<double> id_state(std::size_t cell) noexcept {
    return std::span<double>(ids_).subspan(cell * static_cast<std::size_t>(spec_.n_p), static_cast<std::size_t>(spec_.n_p));
  }
  std::span<const double> id_state(std::size_t cell) const noexcept {
    return std::span<const double>(ids_).subspan(cell * static_cast<std::size_t>(spec_.n_p),
                                                 static_cast<std::size_t>(spec_.n_p));
  }
  std::span<double> status_state(std::size_t cell) noexcept {
    return std::span<double>(statuses_).subspan(cell * kStatusCount, kStatusCount);
  }
  std::span<const double> status_state(std::size_t cell) const noexcept {
    return std::span<const double>(statuses_).subspan(cell * kStatusCount, kStatusCount);
  }

  /// Largest |norm^2 - 1| over every amplitude vector.
  double max_norm_error() const noexcept {
    double worst = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c) {
      worst = std::max(worst, std::abs(squared_norm(id_state(c)) - 1.0));
      worst = std::max(worst, std::abs(squared_norm(status_state(c)) - 1.0));
    }
    return worst;
  }

  /// Copies every cell from `point` onward with `other`.
  void swap_tail(QuantumChromosome& other, std::size_t point) noexcept {
    const auto np = static_cast<std::ptrdiff_t>(spec_.n_p);
    const auto ns = static_cast<std::ptrdiff_t>(kStatusCount);
    const auto p = static_cast<std::ptrdiff_t>(point);
    std::swap_ranges(ids_.begin() + p * np, ids_.end(), other.ids_.begin() + p * np);
    std::swap_ranges(statuses_.begin() + p * ns, statuses_.end(), other.statuses_.begin() + p * ns);
  }

  friend bool operator==(const QuantumChromosome&, const QuantumChromosome&) = default;

 private:
  static const ProblemSpec& checked(const ProblemSpec& spec) {
    spec.validate();
    return spec;
  }

  ProblemSpec spec_;
  std::vector<double> ids_;
  std::vector<double> statuses_;
};

inline QuantumChromosome uniform_quantum_chromosome(const ProblemSpec& spec) { return QuantumChromosome(spec); }

/// Non-demolition measurement: samples one classical schedule and leaves
/// the amplitudes untouched. Every cell consumes two draws (status, then ID).
inline Chromosome observe(const QuantumChromosome& q, Stream& rng) {
  Chromosome shadow(q.spec());
  auto cells = shadow.cells();
  for (std::size_t c = 0; c < q.cell_count(); ++c) {
    const double u_status = rng.uniform01();
    const double u_id = rng.uniform01();
    const Status s = status_from_index(sample_index(q.status_state(c), u_status));
    cells[c] = is_working(s) ? SlotCell::working(s, static_cast<PatientId>(sample_index(q.id_state(c), u_id)))
                             : SlotCell::idle();
  }
  return shadow;
}

struct QuantumEvaluation {
  double fitness = 0.0;
  Chromosome shadow;
  FitnessBreakdown breakdown;
};

inline QuantumEvaluation q_evaluate(const QuantumChromosome& q, const ScoreTable& table, Stream& rng) {
  QuantumEvaluation e;
  e.shadow = observe(q, rng);
  e.breakdown = evaluate_breakdown(e.shadow, table);
  e.fitness = e.breakdown.total;
  return e;
}

inline std::pair<QuantumChromosome, QuantumChromosome> q_single_point_crossover(const QuantumChromosome& a,
                                                                                const QuantumChromosome& b,
                                                                                std::size_t point) {
  if (a.spec() != b.spec()) throw std::invalid_argument("crossover parents differ in shape");
  if (point < 1 || point >= a.cell_count()) throw std::out_of_range("crossing point outside [1, n_g*n_t - 1]");
  QuantumChromosome c1 = a;
  QuantumChromosome c2 = b;
  c1.swap_tail(c2, point);
  return {std::move(c1), std::move(c2)};
}

inline void crossover_step(std::vector<QuantumChromosome>& pop, double r_c, Stream& rng) {
  if (pop.empty()) return;
  crossover_step(pop, r_c, pop.front().cell_count(), rng,
                 [](const QuantumChromosome& a, const QuantumChromosome& b, std::size_t point) {
                   return q_single_point_crossover(a, b, point);
                 });
}

/// Demolition projection of one random cell: both its ID and status states
/// collapse to random basis vectors.
inline void q_mutate(QuantumChromosome& q, Stream& rng) {
  const std::size_t cell = rng.below(q.cell_count());
  const std::size_t id = rng.below(static_cast<std::uint64_t>(q.spec().n_p));
  const std::size_t status = rng.below(kStatusCount);
  auto ids = q.id_state(cell);
  auto statuses = q.status_state(cell);
  std::fill(ids.begin(), ids.end(), 0.0);
  std::fill(statuses.begin(), statuses.end(), 0.0);
  ids[id] = 1.0;
  statuses[status] = 1.0;
}

/// Observes the chromosome, plans a repaired schedule from the observation,
/// and amplifies each cell toward the planned status (and patient, for
/// working cells). Returns the plan.
inline Chromosome q_repair(QuantumChromosome& q, Stream& rng) {
  const Chromosome desired = repair_chromosome(observe(q, rng));
  for (std::size_t c = 0; c < q.cell_count(); ++c) {
    const SlotCell& cell = desired.cells()[c];
    amplify(q.status_state(c), index_of(cell.status));
    if (cell.has_patient()) amplify(q.id_state(c), static_cast<std::size_t>(cell.patient));
  }
  return desired;
}

// ---------------------------------------------------------------------------
// Generation loop
// ---------------------------------------------------------------------------

/// Same skeleton as run_classical with the quantum operators. Each
/// chromosome is observed once per generation; that sampled fitness drives
/// ranking, and best-ever keeps the best observed schedule.
inline RunResult run_quantum(const ProblemSpec& spec, const GaParams& params, const ScoreTable& table = {},
                             unsigned threads = 1) {
  detail::validate_run_inputs(spec, params, table);
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t seed = params.seed;

  std::vector<QuantumChromosome> pop(static_cast<std::size_t>(params.n_ini), uniform_quantum_chromosome(spec));

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(params.g_max) + 1);
  std::optional<QuantumEvaluation> best;

  for (int gen = 0; gen <= params.g_max; ++gen) {
    const auto generation = static_cast<std::uint64_t>(gen);

    std::vector<QuantumEvaluation> evals(pop.size());
    parallel_for(pop.size(), threads, [&](std::size_t i) {
      Stream rng = Stream::substream(seed, generation, Phase::evaluate, i);
      evals[i] = q_evaluate(pop[i], table, rng);
    });

    std::vector<double> fitness(pop.size());
    std::size_t top = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      fitness[i] = evals[i].fitness;
      if (fitness[i] > fitness[top]) top = i;
    }
    if (!best || fitness[top] > best->fitness) best = std::move(evals[top]);

    detail::apply_selection(pop, fitness, params);
    result.records.push_back({gen, fitness.front(), static_cast<int>(pop.size())});
    if (gen == params.g_max) break;

    Stream pairing = Stream::substream(seed, generation, Phase::pairing, 0);
    crossover_step(pop, params.r_c, pairing);

    const std::size_t n = pop.size();
    Stream pick_mutation = Stream::substream(seed, generation, Phase::select_id_mutation, 0);
    const auto mutation_targets = sample_without_replacement(n, detail::ratio_count(params.r_m, n), pick_mutation);
    parallel_for(mutation_targets.size(), threads, [&](std::size_t k) {
      Stream rng = Stream::substream(seed, generation, Phase::id_mutation, mutation_targets[k]);
      q_mutate(pop[mutation_targets[k]], rng);
    });

    Stream pick_repair = Stream::substream(seed, generation, Phase::select_repair, 0);
    const auto repair_targets = sample_without_replacement(n, detail::ratio_count(params.r_r, n), pick_repair);
    parallel_for(repair_targets.size(), threads, [&](std::size_t k) {
      Stream rng = Stream::substream(seed, generation, Phase::repair, repair_targets[k]);
      q_repair(pop[repair_targets[k]], rng);
    });
  }

  result.best_schedule = std::move(best->shadow);
  result.best_fitness = best->breakdown;
  result.elapsed_seconds = detail::seconds_since(started);
  return result;
}

// ---------------------------------------------------------------------------
// Resource estimate
// ---------------------------------------------------------------------------

constexpr std::uint64_t ceil_log2(std::uint64_t n) noexcept { return n <= 1 ? 0 : std::bit_width(n - 1); }

/// Qubits needed to hold a population of N quantum chromosomes:
/// N * n_t * n_g * (ceil(log2 n_p) + ceil(log2 n_s)).
inline std::uint64_t qubit_estimate(std::uint64_t population, std::uint64_t n_t, std::uint64_t n_g, std::uint64_t n_p,
                                    std::uint64_t n_s) {
  if (population < 1 || n_t < 1 || n_g < 1 || n_p < 1 || n_s < 1)
    throw ConfigError("qubit estimate arguments must be >= 1");
  std::uint64_t total = ceil_log2(n_p) + ceil_log2(n_s);
  for (std::uint64_t factor : {n_g, n_t, population}) {
    if (total != 0 && factor > std::numeric_limits<std::uint64_t>::max() / total)
      throw std::overflow_error("qubit estimate overflows 64 bits");
    total *= factor;
  }
  return total;
}

}  // namespace gantry
