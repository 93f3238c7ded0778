#include <gtest/gtest.h>

#include "gantry/classical_ga.hpp"
#include "gantry/repair.hpp"
#include "oracle.hpp"

namespace gantry {
namespace {

void expect_structurally_clean(const Chromosome& chrom) {
  const FitnessCounts c = count_occurrences(chrom);
  EXPECT_EQ(c.duration_violation, 0);
  EXPECT_EQ(c.conflict, 0);
  EXPECT_EQ(c.interruption, 0);
  EXPECT_EQ(c.duplicate_treatment, 0);
}

TEST(Repair, AllIdleSinglePatientGetsOneTreatment) {
  const Chromosome out = repair_chromosome(Chromosome(ProblemSpec{1, 1, 27}));
  const auto episodes = parse_episodes(out.track(0), 0);
  ASSERT_EQ(episodes.size(), 1u);
  EXPECT_TRUE(episodes[0].complete);
  EXPECT_EQ(episodes[0].patient, 0);
  const auto b = evaluate_breakdown(out);
  EXPECT_EQ(b.counts.completed_therapy, 1);
  EXPECT_EQ(b.total, 142.0);  // perfect track minus the missing trailing G_PD -> G_IDL transition
  expect_structurally_clean(out);
}

TEST(Repair, PerfectScheduleIsFixedPoint) {
  const Chromosome perfect = oracle::perfect_track();
  EXPECT_EQ(repair_chromosome(perfect), perfect);

  Chromosome opening_treatment(ProblemSpec{1, 2, 26});
  oracle::plant_treatment(opening_treatment, 0, 0, 1);
  EXPECT_EQ(repair_chromosome(opening_treatment), opening_treatment);
}

TEST(Repair, SimultaneousPatientOnTwoGantriesResolved) {
  const Chromosome doubled = oracle::perfect_track(2, 2);
  ASSERT_GT(count_occurrences(doubled).conflict, 0);
  const Chromosome out = repair_chromosome(doubled);
  expect_structurally_clean(out);
  // Gantry 0 keeps its incumbent; gantry 1 is reassigned to patient 1.
  EXPECT_EQ(out.at(0, 1).patient, 0);
  EXPECT_EQ(out.at(1, 1).patient, 1);
}

TEST(Repair, TooShortTrackGoesIdle) {
  Stream rng(1);
  const Chromosome out = repair_chromosome(random_chromosome(ProblemSpec{2, 3, 25}, rng));
  EXPECT_EQ(out, Chromosome(ProblemSpec{2, 3, 25}));
}

TEST(Repair, AlreadyTreatedPatientsAreSkipped) {
  TreatedSet treated = {true, false, true};
  const Chromosome out = repair_chromosome(Chromosome(ProblemSpec{1, 3, 60}), treated);
  const auto episodes = parse_episodes(out.track(0), 0);
  ASSERT_EQ(episodes.size(), 1u);
  EXPECT_EQ(episodes[0].patient, 1);
}

TEST(Repair, IncumbentPatientPreferred) {
  Chromosome chrom(ProblemSpec{1, 5, 28});
  chrom.at(0, 0) = SlotCell::working(Status::adjust_target, 3);
  const Chromosome out = repair_chromosome(chrom);
  EXPECT_EQ(out.at(0, 0), SlotCell::working(Status::ready, 3));
  EXPECT_EQ(out.at(0, 25), SlotCell::working(Status::dispose, 3));
  EXPECT_TRUE(out.at(0, 26).is_idle());
}

TEST(Repair, MediumInstanceFillsEveryPatient) {
  const Chromosome out = repair_chromosome(Chromosome(medium_problem()));
  const auto b = evaluate_breakdown(out);
  EXPECT_EQ(b.counts.completed_therapy, 12);
  expect_structurally_clean(out);
}

TEST(Repair, PropertyCleanDeterministicAndIdempotent) {
  const ProblemSpec specs[] = {medium_problem(), {2, 3, 60}, {4, 2, 70}, {1, 5, 200}};
  for (const ProblemSpec& spec : specs) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      Stream rng(seed);
      const Chromosome input = random_chromosome(spec, rng);
      const Chromosome out = repair_chromosome(input);
      ASSERT_TRUE(out.valid());
      expect_structurally_clean(out);
      EXPECT_EQ(repair_chromosome(input), out);
      EXPECT_EQ(repair_chromosome(out), out);
      EXPECT_EQ(count_occurrences(out), oracle::brute_force_counts(out));
    }
  }
}

}  // namespace
}  // namespace gantry
