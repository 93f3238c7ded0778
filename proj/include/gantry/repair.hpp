#pragma once

#include <vector>

#include "gantry/schedule.hpp"

namespace gantry {

/// Patients already served elsewhere, indexed by patient ID.
using TreatedSet = std::vector<bool>;

namespace detail {

inline void stamp_treatment(std::span<SlotCell> track, int start, PatientId patient) {
  int t = start;
  for (Status s : kWorkingCycle)
    for (int k = 0; k < status_duration(s); ++k) track[t++] = SlotCell::working(s, patient);
}

}  // namespace detail

/// Greedy left-to-right rebuild of every track.
///
/// Each track follows the cycle G_IDL(1) -> G_R .. G_PD -> G_IDL(1) -> ...
/// A track may open with an idle slot (kept when the incumbent is idle) or
/// directly with G_R. Wherever the cycle expects G_R a full treatment is
/// stamped if it fits before the end of
/// the track. The patient is the incumbent cell's ID when that patient is not
/// yet treated, otherwise the lowest untreated ID; with nobody left (or no
/// room) the remainder of the track goes idle. Tracks are processed in gantry
/// order, so each patient is treated at most once overall and lower gantries
/// win contested patients.
///
/// The result has no duration violations, conflicts, interruptions or
/// duplicate treatments, and repair is idempotent.
inline Chromosome repair_chromosome(const Chromosome& chrom, const TreatedSet& already_treated = {}) {
  const ProblemSpec& spec = chrom.spec();
  TreatedSet treated(static_cast<std::size_t>(spec.n_p), false);
  for (std::size_t p = 0; p < already_treated.size() && p < treated.size(); ++p) treated[p] = already_treated[p];

  std::size_t lowest_untreated = 0;
  auto next_untreated = [&]() -> PatientId {
    while (lowest_untreated < treated.size() && treated[lowest_untreated]) ++lowest_untreated;
    return lowest_untreated < treated.size() ? static_cast<PatientId>(lowest_untreated) : kVacant;
  };

  Chromosome out(spec);
  for (int g = 0; g < spec.n_g; ++g) {
    const Track incumbent = chrom.track(g);
    std::span<SlotCell> track = out.track(g);

    int t = 0;
    // At slot 0 either an idle cell or a treatment may open the track; after
    // a treatment the cycle always expects one idle slot.
    if (incumbent[0].is_idle()) t = 1;
    while (t < spec.n_t) {
      if (t + kTreatmentMinutes > spec.n_t) break;

      PatientId patient = incumbent[t].patient;
      if (patient == kVacant || treated[static_cast<std::size_t>(patient)]) patient = next_untreated();
      if (patient == kVacant) break;

      detail::stamp_treatment(track, t, patient);
      treated[static_cast<std::size_t>(patient)] = true;
      t += kTreatmentMinutes + 1;
    }
    // Remaining cells of `out` are already idle.
  }
  return out;
}

}  // namespace gantry
