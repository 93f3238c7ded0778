// Acceptance gate. One PASS/FAIL line per criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gantry/gantry.hpp"
#include "oracle.hpp"

using namespace gantry;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr int kOracleSchedules = 1000;
constexpr double kOracleBudgetSeconds = 10.0;
constexpr std::uint64_t kExpectedQubits = 1'365'000;
constexpr int kChiVectors = 20;
constexpr int kChiDraws = 100'000;
constexpr double kChiAlpha = 0.001;
constexpr int kChiRequiredPasses = 19;
constexpr double kChiBudgetSeconds = 5.0;
constexpr int kQuantumOperations = 10'000;
constexpr double kNormTolerance = 1e-6;
constexpr double kNormBudgetSeconds = 30.0;
constexpr int kClassicalCap = 150;
constexpr int kQuantumCap = 50;
constexpr int kPopulationSeeds = 5;
constexpr double kPopulationBudgetSeconds = 300.0;
constexpr int kConvergenceSeeds = 10;
constexpr double kMedianRatioLimit = 2.0;
constexpr double kConvergenceBudgetSeconds = 600.0;
constexpr int kRepairInputs = 1000;
constexpr double kRepairBudgetSeconds = 30.0;
constexpr double kDeterminismBudgetSeconds = 300.0;
constexpr double kClassicalRuntimeLimit = 60.0;
constexpr double kQuantumRuntimeLimit = 300.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Verdict fitness_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const ProblemSpec spec{2, 3, 20};
  int mismatches = 0;
  for (int i = 0; i < kOracleSchedules; ++i) {
    Stream rng = Stream::substream(2024, 0, Phase::init, static_cast<std::uint64_t>(i));
    const Chromosome chrom = random_chromosome(spec, rng);
    if (!(count_occurrences(chrom) == oracle::brute_force_counts(chrom))) ++mismatches;
  }
  const double t = elapsed(start);
  return {mismatches == 0 && t < kOracleBudgetSeconds,
          fmt("%d/%d schedules match the brute-force recount, %.2f s (limit %.0f s)", kOracleSchedules - mismatches,
              kOracleSchedules, t, kOracleBudgetSeconds)};
}

Verdict fixtures() {
  const double perfect = evaluate_breakdown(oracle::perfect_track()).total;
  const double doubled = evaluate_breakdown(oracle::perfect_track(2, 1)).total;
  const double idle = evaluate_breakdown(Chromosome(ProblemSpec{1, 1, 28})).total;
  return {perfect == 162.0 && doubled == -224.0 && idle == 0.0,
          fmt("perfect %g (want 162), duplicated %g (want -224), idle %g (want 0)", perfect, doubled, idle)};
}

Verdict qubits() {
  const std::uint64_t q = qubit_estimate(70, 650, 3, 72, 8);
  return {q == kExpectedQubits, fmt("qubit_estimate(70, 650, 3, 72, 8) = %llu", static_cast<unsigned long long>(q))};
}

Verdict sampling_law() {
  const auto start = std::chrono::steady_clock::now();
  Stream rng(77);
  int passes = 0;
  double worst_p = 1.0;
  for (int v = 0; v < kChiVectors; ++v) {
    std::vector<double> amp(12);
    for (double& a : amp) a = rng.uniform01() * 2.0 - 1.0;
    const double norm = std::sqrt(squared_norm(amp));
    for (double& a : amp) a /= norm;
    std::vector<double> probs(12);
    for (std::size_t j = 0; j < 12; ++j) probs[j] = amp[j] * amp[j];
    std::vector<std::uint64_t> counts(12, 0);
    for (int d = 0; d < kChiDraws; ++d) ++counts[sample_index(amp, rng.uniform01())];
    const oracle::ChiSquare chi = oracle::chi_square_test(counts, probs);
    worst_p = std::min(worst_p, chi.p_value);
    if (chi.p_value > kChiAlpha) ++passes;
  }
  const double t = elapsed(start);
  return {passes >= kChiRequiredPasses && t < kChiBudgetSeconds,
          fmt("%d/%d vectors with p > %g (min p %.4f), %.2f s (limit %.0f s)", passes, kChiVectors, kChiAlpha, worst_p,
              t, kChiBudgetSeconds)};
}

Verdict normalization() {
  const auto start = std::chrono::steady_clock::now();
  const ProblemSpec spec{2, 5, 60};
  QuantumChromosome q(spec);
  Stream rng(31);
  bool bitwise_unchanged = true;
  double worst = 0.0;
  int counts[3] = {0, 0, 0};
  for (int op = 0; op < kQuantumOperations; ++op) {
    const QuantumChromosome before = q;
    (void)observe(q, rng);
    if (!(q == before)) bitwise_unchanged = false;
    switch (rng.below(3)) {
      case 0: {
        const std::size_t cell = rng.below(q.cell_count());
        if (rng.below(2) == 0)
          amplify(q.id_state(cell), rng.below(static_cast<std::uint64_t>(spec.n_p)));
        else
          amplify(q.status_state(cell), rng.below(kStatusCount));
        ++counts[0];
        break;
      }
      case 1:
        q_mutate(q, rng);
        ++counts[1];
        break;
      default:
        (void)q_repair(q, rng);
        ++counts[2];
        break;
    }
    worst = std::max(worst, q.max_norm_error());
  }
  const double t = elapsed(start);
  return {bitwise_unchanged && worst <= kNormTolerance && t < kNormBudgetSeconds,
          fmt("observe non-demolishing: %s; max |sum a^2 - 1| = %.3g over %d ops (%d amplify, %d q_mutate, %d "
              "q_repair), %.2f s",
              bitwise_unchanged ? "yes" : "no", worst, kQuantumOperations, counts[0], counts[1], counts[2], t)};
}

int max_population(const RunResult& r) {
  int m = 0;
  for (const GenerationRecord& rec : r.records) m = std::max(m, rec.population);
  return m;
}

Verdict population_discipline() {
  const auto start = std::chrono::steady_clock::now();
  int worst_classical = 0;
  int worst_quantum = 0;
  bool full_length = true;
  for (int s = 0; s < kPopulationSeeds; ++s) {
    GaParams pc = classical_medium_params();
    GaParams pq = quantum_medium_params();
    pc.seed = pq.seed = 1000 + static_cast<std::uint64_t>(s);
    const RunResult rc = run_classical(medium_problem(), pc, {}, default_threads());
    const RunResult rq = run_quantum(medium_problem(), pq, {}, default_threads());
    full_length = full_length && rc.records.size() == 201 && rq.records.size() == 201;
    worst_classical = std::max(worst_classical, max_population(rc));
    worst_quantum = std::max(worst_quantum, max_population(rq));
  }
  const double t = elapsed(start);
  return {full_length && worst_classical <= kClassicalCap && worst_quantum <= kQuantumCap &&
              t < kPopulationBudgetSeconds,
          fmt("max population classical %d (cap %d), quantum %d (cap %d), %d seeds x 200 generations, %.1f s",
              worst_classical, kClassicalCap, worst_quantum, kQuantumCap, kPopulationSeeds, t)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (v[(n - 1) / 2] + v[n / 2]) / 2.0;
}

Verdict convergence() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> best_classical;
  std::vector<double> best_quantum;
  int improved_classical = 0;
  int improved_quantum = 0;
  for (int s = 0; s < kConvergenceSeeds; ++s) {
    GaParams pc = classical_medium_params();
    GaParams pq = quantum_medium_params();
    pc.seed = pq.seed = static_cast<std::uint64_t>(s);
    const RunResult rc = run_classical(medium_problem(), pc, {}, default_threads());
    const RunResult rq = run_quantum(medium_problem(), pq, {}, default_threads());
    if (rc.best_fitness.total > rc.records.front().best_fitness) ++improved_classical;
    if (rq.best_fitness.total > rq.records.front().best_fitness) ++improved_quantum;
    best_classical.push_back(rc.best_fitness.total);
    best_quantum.push_back(rq.best_fitness.total);
  }
  const double mc = median(best_classical);
  const double mq = median(best_quantum);
  const bool same_sign = (mc > 0 && mq > 0) || (mc < 0 && mq < 0);
  const double ratio = same_sign ? std::max(mc, mq) / std::min(mc, mq) : INFINITY;
  const double t = elapsed(start);
  return {improved_classical == kConvergenceSeeds && improved_quantum == kConvergenceSeeds && same_sign &&
              ratio <= kMedianRatioLimit && t < kConvergenceBudgetSeconds,
          fmt("improved classical %d/%d, quantum %d/%d; median best-ever classical %g, quantum %g, ratio %.3f "
              "(limit %.1f), %.1f s",
              improved_classical, kConvergenceSeeds, improved_quantum, kConvergenceSeeds, mc, mq, ratio,
              kMedianRatioLimit, t)};
}

Verdict repair_guarantee() {
  const auto start = std::chrono::steady_clock::now();
  int dirty = 0;
  for (int i = 0; i < kRepairInputs; ++i) {
    Stream rng = Stream::substream(55, 0, Phase::repair, static_cast<std::uint64_t>(i));
    const FitnessCounts c = oracle::brute_force_counts(repair_chromosome(random_chromosome(medium_problem(), rng)));
    if (c.duration_violation || c.conflict || c.interruption || c.duplicate_treatment) ++dirty;
  }
  const double t = elapsed(start);
  return {dirty == 0 && t < kRepairBudgetSeconds,
          fmt("%d/%d repaired schedules have nonzero structural penalties, %.2f s", dirty, kRepairInputs, t)};
}

Verdict determinism() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / "gantry_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  io::write_file_atomic(root / "medium.json", "{}");
  bool identical = true;
  bool ran = true;
  for (Algorithm alg : {Algorithm::classical, Algorithm::quantum}) {
    std::string files[2][2];
    const unsigned threads[2] = {1, 8};
    for (int k = 0; k < 2; ++k) {
      const fs::path out = root / (std::string(algorithm_name(alg)) + std::to_string(threads[k]));
      cli::RunCommand cmd{root / "medium.json", alg, 42, threads[k], out};
      std::ostringstream sink;
      if (cli::cmd_run(cmd, sink, sink) != cli::kOk) ran = false;
      files[k][0] = io::read_file(out / "curves.csv");
      files[k][1] = io::read_file(out / "best_schedule.json");
    }
    identical = identical && files[0][0] == files[1][0] && files[0][1] == files[1][1];
  }
  fs::remove_all(root);
  const double t = elapsed(start);
  return {ran && identical && t < kDeterminismBudgetSeconds,
          fmt("curves.csv and best_schedule.json %s at 1 vs 8 threads (classical and quantum), %.1f s",
              identical ? "bit-identical" : "DIFFER", t)};
}

Verdict runtime() {
  GaParams pc = classical_medium_params();
  GaParams pq = quantum_medium_params();
  pc.seed = pq.seed = 7;
  auto start = std::chrono::steady_clock::now();
  (void)run_classical(medium_problem(), pc, {}, 1);
  const double tc = elapsed(start);
  start = std::chrono::steady_clock::now();
  (void)run_quantum(medium_problem(), pq, {}, 1);
  const double tq = elapsed(start);
  return {tc <= kClassicalRuntimeLimit && tq <= kQuantumRuntimeLimit,
          fmt("single-threaded medium run: classical %.2f s (limit %.0f s), quantum %.2f s (limit %.0f s)", tc,
              kClassicalRuntimeLimit, tq, kQuantumRuntimeLimit)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"fitness oracle equivalence", fitness_oracle},
      {"hand-evaluated fixtures", fixtures},
      {"qubit estimate", qubits},
      {"sampling law", sampling_law},
      {"non-demolition and normalization", normalization},
      {"population discipline", population_discipline},
      {"convergence behavior", convergence},
      {"repair guarantee", repair_guarantee},
      {"determinism across thread counts", determinism},
      {"desk-scale runtime", runtime},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
