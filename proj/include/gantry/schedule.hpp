#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gantry/error.hpp"
#include "gantry/rng.hpp"

namespace gantry {

// ---------------------------------------------------------------------------
// Gantry statuses
// ---------------------------------------------------------------------------

enum class Status : std::uint8_t {
  idle,            // G_IDL
  ready,           // G_R
  wait_patient,    // G_WP
  adjust_target,   // G_AT
  wait_control,    // G_WC
  wait_accel,      // G_WA
  irradiation,     // G_IR
  dispose,         // G_PD
};

inline constexpr std::size_t kStatusCount = 8;

inline constexpr std::array<Status, kStatusCount> kAllStatuses = {
    Status::idle,         Status::ready,      Status::wait_patient, Status::adjust_target,
    Status::wait_control, Status::wait_accel, Status::irradiation,  Status::dispose};

/// The seven statuses of one treatment, in order.
inline constexpr std::array<Status, 7> kWorkingCycle = {
    Status::ready,      Status::wait_patient, Status::adjust_target, Status::wait_control,
    Status::wait_accel, Status::irradiation,  Status::dispose};

constexpr std::size_t index_of(Status s) noexcept { return static_cast<std::size_t>(s); }

constexpr Status status_from_index(std::size_t i) noexcept { return static_cast<Status>(i); }

/// Duration in one-minute slots.
constexpr int status_duration(Status s) noexcept {
  constexpr std::array<int, kStatusCount> minutes = {1, 1, 3, 15, 1, 1, 1, 4};
  return minutes[index_of(s)];
}

constexpr Status expected_next(Status s) noexcept {
  return status_from_index((index_of(s) + 1) % kStatusCount);
}

constexpr bool is_working(Status s) noexcept { return s != Status::idle; }

/// Minutes from G_R to the end of G_PD.
inline constexpr int kTreatmentMinutes = [] {
  int total = 0;
  for (Status s : kWorkingCycle) total += status_duration(s);
  return total;
}();

constexpr std::string_view status_symbol(Status s) noexcept {
  constexpr std::array<std::string_view, kStatusCount> symbols = {
      "G_IDL", "G_R", "G_WP", "G_AT", "G_WC", "G_WA", "G_IR", "G_PD"};
  return symbols[index_of(s)];
}

constexpr std::optional<Status> parse_status_symbol(std::string_view symbol) noexcept {
  for (Status s : kAllStatuses)
    if (status_symbol(s) == symbol) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Problem and cells
// ---------------------------------------------------------------------------

struct ProblemSpec {
  int n_g = 1;  // gantries
  int n_p = 1;  // patients
  int n_t = 1;  // one-minute slots per gantry

  bool valid() const noexcept { return n_g >= 1 && n_p >= 1 && n_t >= 1; }

  /// False when no complete treatment can fit on a track.
  bool can_complete_episode() const noexcept { return n_t >= kTreatmentMinutes; }

  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(n_g) * static_cast<std::size_t>(n_t);
  }

  void validate() const {
    if (n_g < 1) throw ConfigError("n_g must be >= 1", "n_g");
    if (n_p < 1) throw ConfigError("n_p must be >= 1", "n_p");
    if (n_t < 1) throw ConfigError("n_t must be >= 1", "n_t");
  }

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

using PatientId = std::int32_t;
inline constexpr PatientId kVacant = -1;

/// One slot of one gantry. Idle cells carry no patient.
struct SlotCell {
  Status status = Status::idle;
  PatientId patient = kVacant;

  static constexpr SlotCell idle() noexcept { return {}; }
  static constexpr SlotCell working(Status s, PatientId p) noexcept { return {s, p}; }

  constexpr bool is_idle() const noexcept { return status == Status::idle; }
  constexpr bool has_patient() const noexcept { return patient != kVacant; }

  constexpr bool valid(int n_p) const noexcept {
    return is_idle() ? patient == kVacant : (patient >= 0 && patient < n_p);
  }

  friend constexpr bool operator==(const SlotCell&, const SlotCell&) = default;
};

/// Vacant IDs never match, not even each other.
constexpr bool same_patient(const SlotCell& a, const SlotCell& b) noexcept {
  return a.has_patient() && b.has_patient() && a.patient == b.patient;
}

using Track = std::span<const SlotCell>;

// ---------------------------------------------------------------------------
// Chromosome: the full daily schedule, stored track-major.
// ---------------------------------------------------------------------------

class Chromosome {
 public:
  Chromosome() = default;

  /// All-idle schedule.
  explicit Chromosome(const ProblemSpec& spec) : spec_(spec), cells_(checked(spec).cell_count()) {}

  Chromosome(const ProblemSpec& spec, std::vector<SlotCell> cells) : spec_(spec), cells_(std::move(cells)) {
    checked(spec);
    if (cells_.size() != spec.cell_count()) throw ConfigError("cell count does not match n_g * n_t");
    for (const SlotCell& c : cells_)
      if (!c.valid(spec.n_p)) throw ConfigError("cell violates idle/patient invariant");
  }

  const ProblemSpec& spec() const noexcept { return spec_; }

  Track track(int g) const noexcept {
    return Track(cells_).subspan(static_cast<std::size_t>(g) * spec_.n_t, spec_.n_t);
  }
  std::span<SlotCell> track(int g) noexcept {
    return std::span<SlotCell>(cells_).subspan(static_cast<std::size_t>(g) * spec_.n_t, spec_.n_t);
  }

  const SlotCell& at(int g, int t) const noexcept { return cells_[flat_index(g, t)]; }
  SlotCell& at(int g, int t) noexcept { return cells_[flat_index(g, t)]; }

  /// Track-major flattening used by crossover.
  std::span<const SlotCell> cells() const noexcept { return cells_; }
  std::span<SlotCell> cells() noexcept { return cells_; }

  std::size_t flat_index(int g, int t) const noexcept {
    return static_cast<std::size_t>(g) * spec_.n_t + static_cast<std::size_t>(t);
  }

  bool valid() const noexcept {
    if (!spec_.valid() || cells_.size() != spec_.cell_count()) return false;
    for (const SlotCell& c : cells_)
      if (!c.valid(spec_.n_p)) return false;
    return true;
  }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;

 private:
  static const ProblemSpec& checked(const ProblemSpec& spec) {
    spec.validate();
    return spec;
  }

  ProblemSpec spec_;
  std::vector<SlotCell> cells_;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Maximal block of equal cells (same status and same patient; idle blocks
/// merge since they all carry the vacant ID).
struct Run {
  Status status = Status::idle;
  PatientId patient = kVacant;
  int start = 0;
  int length = 0;

  int end() const noexcept { return start + length; }  // one past the last slot

  friend bool operator==(const Run&, const Run&) = default;
};

inline std::vector<Run> parse_runs(Track track) {
  std::vector<Run> runs;
  const int n = static_cast<int>(track.size());
  for (int t = 0; t < n; ++t) {
    if (!runs.empty() && track[t] == track[t - 1]) {
      ++runs.back().length;
    } else {
      runs.push_back({track[t].status, track[t].patient, t, 1});
    }
  }
  return runs;
}

/// One patient's contiguous working segment. `end` is inclusive.
struct Episode {
  PatientId patient = kVacant;
  int gantry = 0;
  int start = 0;
  int end = 0;
  bool complete = false;

  int length() const noexcept { return end - start + 1; }

  friend bool operator==(const Episode&, const Episode&) = default;
};

namespace detail {

inline bool is_canonical_cycle(std::span<const Run> runs) {
  if (runs.size() != kWorkingCycle.size()) return false;
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (runs[i].status != kWorkingCycle[i] || runs[i].length != status_duration(kWorkingCycle[i])) return false;
  return true;
}

}  // namespace detail

/// Splits a track into maximal same-patient working segments. A segment is
/// complete when it is exactly G_R..G_PD with the canonical durations.
inline std::vector<Episode> parse_episodes(Track track, int gantry) {
  std::vector<Episode> episodes;
  const std::vector<Run> runs = parse_runs(track);
  std::size_t i = 0;
  while (i < runs.size()) {
    if (!is_working(runs[i].status)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < runs.size() && is_working(runs[j].status) && runs[j].patient == runs[i].patient) ++j;
    const std::span<const Run> segment(runs.data() + i, j - i);
    episodes.push_back({runs[i].patient, gantry, runs[i].start, runs[j - 1].end() - 1,
                        detail::is_canonical_cycle(segment)});
    i = j;
  }
  return episodes;
}

// ---------------------------------------------------------------------------
// Random schedules
// ---------------------------------------------------------------------------

/// Uniform status, then a uniform patient which idle cells discard.
inline SlotCell random_cell(const ProblemSpec& spec, Stream& rng) {
  const Status s = status_from_index(rng.below(kStatusCount));
  const auto p = static_cast<PatientId>(rng.below(static_cast<std::uint64_t>(spec.n_p)));
  return is_working(s) ? SlotCell::working(s, p) : SlotCell::idle();
}

inline Chromosome random_chromosome(const ProblemSpec& spec, Stream& rng) {
  Chromosome chrom(spec);
  for (SlotCell& c : chrom.cells()) c = random_cell(spec, rng);
  return chrom;
}

}  // namespace gantry
