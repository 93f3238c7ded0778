#include <algorithm>

#include <gtest/gtest.h>

#include "gantry/fitness.hpp"
#include "oracle.hpp"

namespace gantry {
namespace {

TEST(Fitness, AllIdleScoresZero) {
  const auto b = evaluate_breakdown(Chromosome(ProblemSpec{3, 12, 108}));
  EXPECT_EQ(b.counts, FitnessCounts{});
  EXPECT_EQ(b.total, 0.0);
}

TEST(Fitness, PerfectTrackScores162) {
  const Chromosome chrom = oracle::perfect_track();
  const auto b = evaluate_breakdown(chrom);
  EXPECT_EQ(b.counts.consecutive_run, 7);
  EXPECT_EQ(b.counts.ordered_transition, 8);
  EXPECT_EQ(b.counts.completed_therapy, 1);
  EXPECT_EQ(b.counts.time_slots, 26);
  EXPECT_EQ(b.counts.duration_violation, 0);
  EXPECT_EQ(b.counts.interruption, 0);
  EXPECT_EQ(b.total, 162.0);
  EXPECT_EQ(b.counts, oracle::brute_force_counts(chrom));
}

TEST(Fitness, DuplicatedPerfectTrackScoresMinus224) {
  const Chromosome chrom = oracle::perfect_track(2);
  const auto b = evaluate_breakdown(chrom);
  EXPECT_EQ(b.counts.conflict, 26);
  EXPECT_EQ(b.counts.duplicate_treatment, 1);
  EXPECT_EQ(b.counts.completed_therapy, 2);
  EXPECT_EQ(b.counts.consecutive_run, 14);
  EXPECT_EQ(b.counts.ordered_transition, 16);
  EXPECT_EQ(b.counts.time_slots, 52);
  EXPECT_EQ(b.total, -224.0);
  EXPECT_EQ(b.counts, oracle::brute_force_counts(chrom));
}

TEST(Fitness, HandoverBeforeDisposeIsInterruption) {
  Chromosome chrom(ProblemSpec{1, 2, 4});
  chrom.at(0, 0) = SlotCell::working(Status::adjust_target, 0);
  chrom.at(0, 1) = SlotCell::working(Status::adjust_target, 1);
  chrom.at(0, 2) = SlotCell::working(Status::dispose, 1);
  chrom.at(0, 3) = SlotCell::working(Status::ready, 0);
  const auto c = count_occurrences(chrom);
  EXPECT_EQ(c.interruption, 1);  // G_PD -> G_R handover is allowed
  EXPECT_EQ(c, oracle::brute_force_counts(chrom));
}

TEST(Fitness, WorkingTransitionNeedsSamePatient) {
  Chromosome chrom(ProblemSpec{1, 2, 2});
  chrom.at(0, 0) = SlotCell::working(Status::ready, 0);
  chrom.at(0, 1) = SlotCell::working(Status::wait_patient, 1);
  EXPECT_EQ(count_occurrences(chrom).ordered_transition, 0);
  chrom.at(0, 1).patient = 0;
  EXPECT_EQ(count_occurrences(chrom).ordered_transition, 1);
}

TEST(Fitness, IdleRunsAreNeutral) {
  Chromosome chrom(ProblemSpec{1, 1, 10});
  const auto c = count_occurrences(chrom);
  EXPECT_EQ(c.consecutive_run, 0);
  EXPECT_EQ(c.duration_violation, 0);
}

TEST(Fitness, MatchesBruteForceOnRandomSchedules) {
  const ProblemSpec spec{2, 3, 20};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Stream rng(seed);
    const Chromosome chrom = random_chromosome(spec, rng);
    ASSERT_EQ(count_occurrences(chrom), oracle::brute_force_counts(chrom)) << "seed " << seed;
  }
}

TEST(Fitness, MatchesBruteForceWithPlantedTreatments) {
  // Random noise with whole treatments stamped in, so completion and
  // duplicate counts are exercised too.
  const ProblemSpec spec{3, 3, 70};
  std::int64_t completions = 0;
  std::int64_t duplicates = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Stream rng(seed);
    Chromosome chrom = random_chromosome(spec, rng);
    for (int g = 0; g < spec.n_g; ++g) {
      const int start = static_cast<int>(rng.below(spec.n_t - 26 + 1));
      oracle::plant_treatment(chrom, g, start, static_cast<PatientId>(rng.below(3)));
      if (rng.below(2) == 0 && start > 0) chrom.at(g, start - 1) = SlotCell::idle();
      if (rng.below(2) == 0 && start + 26 < spec.n_t) chrom.at(g, start + 26) = SlotCell::idle();
    }
    const auto c = count_occurrences(chrom);
    ASSERT_EQ(c, oracle::brute_force_counts(chrom)) << "seed " << seed;
    completions += c.completed_therapy;
    duplicates += c.duplicate_treatment;
  }
  EXPECT_GT(completions, 0);
  EXPECT_GT(duplicates, 0);
}

TEST(Fitness, GantryOrderDoesNotMatter) {
  const ProblemSpec spec{3, 4, 60};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Stream rng(seed);
    Chromosome chrom = random_chromosome(spec, rng);
    oracle::plant_treatment(chrom, 0, 3, 1);
    oracle::plant_treatment(chrom, 2, 20, 1);
    const auto before = evaluate_breakdown(chrom);

    Chromosome permuted(spec);
    const int order[] = {2, 0, 1};
    for (int g = 0; g < 3; ++g) std::copy(chrom.track(order[g]).begin(), chrom.track(order[g]).end(), permuted.track(g).begin());
    EXPECT_EQ(evaluate_breakdown(permuted), before);
  }
}

// Idle padding is neutral except for the G_PD -> G_IDL transition it opens
// after a track ending in G_PD.
TEST(Fitness, TrailingIdleSuffixOnlyAddsDisposeTransition) {
  const ProblemSpec spec{2, 3, 40};
  const ProblemSpec longer{2, 3, 55};
  int ending_in_dispose = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Stream rng(seed);
    const Chromosome chrom = random_chromosome(spec, rng);
    Chromosome padded(longer);
    FitnessCounts expected = count_occurrences(chrom);
    for (int g = 0; g < 2; ++g) {
      std::copy(chrom.track(g).begin(), chrom.track(g).end(), padded.track(g).begin());
      if (chrom.at(g, spec.n_t - 1).status == Status::dispose) {
        ++expected.ordered_transition;
        ++ending_in_dispose;
      }
    }
    EXPECT_EQ(count_occurrences(padded), expected);
  }
  EXPECT_GT(ending_in_dispose, 0);
}

TEST(Fitness, TotalIsLinearInEachWeight) {
  const ProblemSpec spec{2, 3, 60};
  Stream rng(99);
  Chromosome chrom = random_chromosome(spec, rng);
  oracle::plant_treatment(chrom, 0, 10, 2);
  const ScoreTable base;
  const auto b = evaluate_breakdown(chrom, base);
  const auto& c = b.counts;

  const std::pair<double ScoreTable::*, std::int64_t> weights[] = {
      {&ScoreTable::conflict, -c.conflict},
      {&ScoreTable::duration_violation, -c.duration_violation},
      {&ScoreTable::duplicate_treatment, -c.duplicate_treatment},
      {&ScoreTable::interruption, -c.interruption},
      {&ScoreTable::time_per_slot, -c.time_slots},
      {&ScoreTable::consecutive_run, c.consecutive_run},
      {&ScoreTable::ordered_transition, c.ordered_transition},
      {&ScoreTable::completed_therapy, c.completed_therapy},
  };
  for (const auto& [member, signed_count] : weights) {
    ScoreTable doubled = base;
    doubled.*member *= 2;
    const double delta = evaluate_breakdown(chrom, doubled).total - b.total;
    EXPECT_DOUBLE_EQ(delta, base.*member * static_cast<double>(signed_count));
  }
}

TEST(ScoreTableTest, DefaultsAndValidation) {
  const ScoreTable t;
  EXPECT_EQ(t.conflict, 20);
  EXPECT_EQ(t.duration_violation, 20);
  EXPECT_EQ(t.duplicate_treatment, 28);
  EXPECT_EQ(t.interruption, 12);
  EXPECT_EQ(t.time_per_slot, 1.5);
  EXPECT_EQ(t.consecutive_run, 3.0);
  EXPECT_EQ(t.ordered_transition, 20);
  EXPECT_EQ(t.completed_therapy, 20);
  ScoreTable bad;
  bad.interruption = -1;
  EXPECT_THROW(bad.validate(), ConfigError);
}

}  // namespace
}  // namespace gantry
