#pragma once

#include <cstdint>
#include <vector>

#include "gantry/error.hpp"
#include "gantry/schedule.hpp"

namespace gantry {

/// Penalty and benefit weights.
struct ScoreTable {
  // penalties
  double conflict = 20.0;
  double duration_violation = 20.0;
  double duplicate_treatment = 28.0;
  double interruption = 12.0;
  double time_per_slot = 1.5;
  // benefits
  double consecutive_run = 3.0;
  double ordered_transition = 20.0;
  double completed_therapy = 20.0;

  void validate() const {
    const std::pair<const char*, double> weights[] = {
        {"conflict", conflict},
        {"duration_violation", duration_violation},
        {"duplicate_treatment", duplicate_treatment},
        {"interruption", interruption},
        {"time_per_slot", time_per_slot},
        {"consecutive_run", consecutive_run},
        {"ordered_transition", ordered_transition},
        {"completed_therapy", completed_therapy},
    };
    for (const auto& [name, w] : weights)
      if (!(w >= 0.0)) throw ConfigError(std::string("score weight must be >= 0: ") + name, name);
  }

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;
};

/// Occurrence counts per category.
struct FitnessCounts {
  std::int64_t conflict = 0;
  std::int64_t duration_violation = 0;
  std::int64_t duplicate_treatment = 0;
  std::int64_t interruption = 0;
  std::int64_t time_slots = 0;
  std::int64_t consecutive_run = 0;
  std::int64_t ordered_transition = 0;
  std::int64_t completed_therapy = 0;

  friend bool operator==(const FitnessCounts&, const FitnessCounts&) = default;
};

/// Benefits minus penalties, summed in a fixed order.
inline double weighted_total(const FitnessCounts& c, const ScoreTable& w) noexcept {
  const double benefit = w.consecutive_run * static_cast<double>(c.consecutive_run) +
                         w.ordered_transition * static_cast<double>(c.ordered_transition) +
                         w.completed_therapy * static_cast<double>(c.completed_therapy);
  const double penalty = w.conflict * static_cast<double>(c.conflict) +
                         w.duration_violation * static_cast<double>(c.duration_violation) +
                         w.duplicate_treatment * static_cast<double>(c.duplicate_treatment) +
                         w.interruption * static_cast<double>(c.interruption) +
                         w.time_per_slot * static_cast<double>(c.time_slots);
  return benefit - penalty;
}

struct FitnessBreakdown {
  FitnessCounts counts;
  double total = 0.0;

  friend bool operator==(const FitnessBreakdown&, const FitnessBreakdown&) = default;
};

/// Counts every penalty and benefit occurrence, scanning tracks in gantry
/// order and slots head to tail. Counting rules:
///  - consecutive_run / duration_violation: one per working run whose length
///    does / does not equal its status duration; idle runs are neutral.
///  - ordered_transition: one per adjacent run pair following the cycle
///    (G_PD -> G_IDL and G_IDL -> G_R included); working pairs need equal IDs.
///  - completed_therapy: one per complete episode.
///  - duplicate_treatment: complete episodes beyond a patient's first.
///  - conflict: one per (slot, unordered gantry pair) sharing a patient.
///  - interruption: one per adjacent working pair with different IDs unless
///    the left cell closes a G_PD run.
///  - time_slots: number of non-idle cells.
inline FitnessCounts count_occurrences(const Chromosome& chrom) {
  const ProblemSpec& spec = chrom.spec();
  FitnessCounts c;
  std::vector<int> completions(static_cast<std::size_t>(spec.n_p), 0);

  for (int g = 0; g < spec.n_g; ++g) {
    const Track track = chrom.track(g);
    const std::vector<Run> runs = parse_runs(track);

    for (std::size_t i = 0; i < runs.size(); ++i) {
      const Run& r = runs[i];
      if (is_working(r.status)) {
        c.time_slots += r.length;
        if (r.length == status_duration(r.status))
          ++c.consecutive_run;
        else
          ++c.duration_violation;
      }
      if (i + 1 < runs.size()) {
        const Run& next = runs[i + 1];
        if (expected_next(r.status) == next.status) {
          const bool both_working = is_working(r.status) && is_working(next.status);
          if (!both_working || r.patient == next.patient) ++c.ordered_transition;
        }
        // Adjacent runs differing in patient with both working is a handover.
        if (is_working(r.status) && is_working(next.status) && r.patient != next.patient &&
            r.status != Status::dispose)
          ++c.interruption;
      }
    }

    for (const Episode& e : parse_episodes(track, g)) {
      if (!e.complete) continue;
      ++c.completed_therapy;
      if (completions[static_cast<std::size_t>(e.patient)]++ > 0) ++c.duplicate_treatment;
    }
  }

  for (int t = 0; t < spec.n_t; ++t)
    for (int g = 0; g < spec.n_g; ++g)
      for (int h = g + 1; h < spec.n_g; ++h)
        if (same_patient(chrom.at(g, t), chrom.at(h, t))) ++c.conflict;

  return c;
}

inline FitnessBreakdown evaluate_breakdown(const Chromosome& chrom, const ScoreTable& table = {}) {
  FitnessBreakdown b;
  b.counts = count_occurrences(chrom);
  b.total = weighted_total(b.counts, table);
  return b;
}

}  // namespace gantry
