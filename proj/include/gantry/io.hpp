#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "gantry/classical_ga.hpp"
#include "gantry/error.hpp"
#include "gantry/fitness.hpp"
#include "gantry/schedule.hpp"
#include "gantry/sweep.hpp"

namespace gantry::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_exact(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to a sibling temp file, then renames over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    throw ConfigError(std::string(what) + ": JSON syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(column));
  }
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& scope) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + scope + key + "'", scope + key);
}

inline const json& require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError("'" + field + "' must be a JSON object", field);
  return j;
}

template <typename T>
void read_number(const json& obj, const std::string& key, T& target, const std::string& scope = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string field = scope + key;
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw ConfigError("'" + field + "' must be an integer", field);
    if constexpr (std::is_unsigned_v<T>) {
      if (it->is_number_unsigned())
        target = it->template get<T>();
      else if (it->template get<std::int64_t>() < 0)
        throw ConfigError("'" + field + "' must be non-negative", field);
      else
        target = static_cast<T>(it->template get<std::int64_t>());
    } else {
      const auto v = it->template get<std::int64_t>();
      if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max())
        throw ConfigError("'" + field + "' is out of range", field);
      target = static_cast<T>(v);
    }
  } else {
    if (!it->is_number()) throw ConfigError("'" + field + "' must be a number", field);
    target = it->template get<T>();
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Score table
// ---------------------------------------------------------------------------

inline json to_json(const ScoreTable& s) {
  return json{{"conflict", s.conflict},
              {"duration_violation", s.duration_violation},
              {"duplicate_treatment", s.duplicate_treatment},
              {"interruption", s.interruption},
              {"time_per_slot", s.time_per_slot},
              {"consecutive_run", s.consecutive_run},
              {"ordered_transition", s.ordered_transition},
              {"completed_therapy", s.completed_therapy}};
}

/// Missing weights keep their defaults.
inline ScoreTable score_table_from_json(const json& j, const std::string& scope = "scores.") {
  detail::require_object(j, scope.substr(0, scope.size() - 1));
  ScoreTable s;
  detail::reject_unknown_keys(j,
                              {"conflict", "duration_violation", "duplicate_treatment", "interruption",
                               "time_per_slot", "consecutive_run", "ordered_transition", "completed_therapy"},
                              scope);
  detail::read_number(j, "conflict", s.conflict, scope);
  detail::read_number(j, "duration_violation", s.duration_violation, scope);
  detail::read_number(j, "duplicate_treatment", s.duplicate_treatment, scope);
  detail::read_number(j, "interruption", s.interruption, scope);
  detail::read_number(j, "time_per_slot", s.time_per_slot, scope);
  detail::read_number(j, "consecutive_run", s.consecutive_run, scope);
  detail::read_number(j, "ordered_transition", s.ordered_transition, scope);
  detail::read_number(j, "completed_therapy", s.completed_therapy, scope);
  s.validate();
  return s;
}

inline json to_json(const FitnessBreakdown& b) {
  const FitnessCounts& c = b.counts;
  return json{{"counts",
               {{"conflict", c.conflict},
                {"duration_violation", c.duration_violation},
                {"duplicate_treatment", c.duplicate_treatment},
                {"interruption", c.interruption},
                {"time_slots", c.time_slots},
                {"consecutive_run", c.consecutive_run},
                {"ordered_transition", c.ordered_transition},
                {"completed_therapy", c.completed_therapy}}},
              {"total", b.total}};
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

/// One experiment. Ratios and G_max are shared; N_ini / N_max are per
/// algorithm. Defaults reproduce the medium instance.
struct RunConfig {
  ProblemSpec problem = medium_problem();
  GaParams classical = classical_medium_params();
  GaParams quantum = quantum_medium_params();
  ScoreTable scores;
  std::string out_dir = ".";

  const GaParams& params(Algorithm a) const noexcept { return a == Algorithm::classical ? classical : quantum; }

  void validate() const {
    problem.validate();
    classical.validate();
    quantum.validate();
    scores.validate();
  }
};

/// Parses the flat config document:
///   { "n_g", "n_p", "n_t", "r_s", "r_c", "r_m", "r_r", "G_max",
///     "classical": {"N_ini", "N_max"}, "quantum": {"N_ini", "N_max"},
///     "scores": {...}, "out_dir" }
/// Every key is optional; unknown keys are errors.
inline RunConfig parse_run_config(std::string_view text) {
  const json root = detail::parse_json(text, "config");
  detail::require_object(root, "<root>");
  detail::reject_unknown_keys(
      root, {"n_g", "n_p", "n_t", "r_s", "r_c", "r_m", "r_r", "G_max", "classical", "quantum", "scores", "out_dir"}, "");

  RunConfig cfg;
  detail::read_number(root, "n_g", cfg.problem.n_g);
  detail::read_number(root, "n_p", cfg.problem.n_p);
  detail::read_number(root, "n_t", cfg.problem.n_t);

  GaParams shared = cfg.classical;
  detail::read_number(root, "r_s", shared.r_s);
  detail::read_number(root, "r_c", shared.r_c);
  detail::read_number(root, "r_m", shared.r_m);
  detail::read_number(root, "r_r", shared.r_r);
  detail::read_number(root, "G_max", shared.g_max);

  auto per_algorithm = [&](const char* name, GaParams defaults) {
    GaParams p = shared;
    p.n_ini = defaults.n_ini;
    p.n_max = defaults.n_max;
    if (const auto it = root.find(name); it != root.end()) {
      const std::string scope = std::string(name) + ".";
      detail::require_object(*it, name);
      detail::reject_unknown_keys(*it, {"N_ini", "N_max"}, scope);
      detail::read_number(*it, "N_ini", p.n_ini, scope);
      detail::read_number(*it, "N_max", p.n_max, scope);
    }
    return p;
  };
  cfg.classical = per_algorithm("classical", cfg.classical);
  cfg.quantum = per_algorithm("quantum", cfg.quantum);

  if (const auto it = root.find("scores"); it != root.end()) cfg.scores = score_table_from_json(*it);
  if (const auto it = root.find("out_dir"); it != root.end()) {
    if (!it->is_string()) throw ConfigError("'out_dir' must be a string", "out_dir");
    cfg.out_dir = it->get<std::string>();
  }

  cfg.problem.validate();
  cfg.scores.validate();
  for (const auto& [name, params] : {std::pair{"classical", &cfg.classical}, std::pair{"quantum", &cfg.quantum}}) {
    try {
      params->validate();
    } catch (const ConfigError& e) {
      const bool per_algorithm = e.field() == "N_ini" || e.field() == "N_max";
      if (!per_algorithm) throw;
      throw ConfigError(std::string(name) + "." + e.what(), std::string(name) + "." + e.field());
    }
  }
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_run_config(read_file(path));
}

inline json to_json(const ProblemSpec& p) { return json{{"n_g", p.n_g}, {"n_p", p.n_p}, {"n_t", p.n_t}}; }

inline json to_json(const GaParams& p) {
  return json{{"r_s", p.r_s}, {"r_c", p.r_c},     {"r_m", p.r_m},     {"r_r", p.r_r},
              {"N_ini", p.n_ini}, {"N_max", p.n_max}, {"G_max", p.g_max}, {"seed", p.seed}};
}

// ---------------------------------------------------------------------------
// Schedule JSON
// ---------------------------------------------------------------------------

/// {"n_g","n_p","n_t","scores","tracks":[[{"status","patient"}...]...],"fitness"}
inline json schedule_to_json(const Chromosome& chrom, const FitnessBreakdown& fitness, const ScoreTable& scores) {
  const ProblemSpec& spec = chrom.spec();
  json tracks = json::array();
  for (int g = 0; g < spec.n_g; ++g) {
    json track = json::array();
    for (const SlotCell& c : chrom.track(g)) {
      json cell{{"status", std::string(status_symbol(c.status))}};
      cell["patient"] = c.has_patient() ? json(c.patient) : json(nullptr);
      track.push_back(std::move(cell));
    }
    tracks.push_back(std::move(track));
  }
  json out = to_json(spec);
  out["scores"] = to_json(scores);
  out["tracks"] = std::move(tracks);
  out["fitness"] = to_json(fitness);
  return out;
}

struct ScheduleDocument {
  Chromosome schedule;
  ScoreTable scores;
  double total = 0.0;  // fitness total as written
};

inline ScheduleDocument schedule_from_json(std::string_view text) {
  const json root = detail::parse_json(text, "schedule");
  detail::require_object(root, "<root>");
  ProblemSpec spec;
  for (const char* key : {"n_g", "n_p", "n_t", "tracks"})
    if (!root.contains(key)) throw ConfigError(std::string("schedule is missing '") + key + "'", key);
  detail::read_number(root, "n_g", spec.n_g);
  detail::read_number(root, "n_p", spec.n_p);
  detail::read_number(root, "n_t", spec.n_t);
  spec.validate();

  const json& tracks = root.at("tracks");
  if (!tracks.is_array() || tracks.size() != static_cast<std::size_t>(spec.n_g))
    throw ConfigError("'tracks' must hold n_g arrays", "tracks");
  std::vector<SlotCell> cells;
  cells.reserve(spec.cell_count());
  for (const json& track : tracks) {
    if (!track.is_array() || track.size() != static_cast<std::size_t>(spec.n_t))
      throw ConfigError("every track must hold n_t cells", "tracks");
    for (const json& cell : track) {
      const auto status = parse_status_symbol(cell.value("status", std::string{}));
      if (!status) throw ConfigError("unknown status symbol", "tracks");
      const json& patient = cell.contains("patient") ? cell.at("patient") : json(nullptr);
      if (!patient.is_null() && !patient.is_number_integer()) throw ConfigError("patient must be an integer or null");
      cells.push_back({*status, patient.is_null() ? kVacant : patient.get<PatientId>()});
    }
  }

  ScheduleDocument doc{Chromosome(spec, std::move(cells)), {}, 0.0};
  if (const auto it = root.find("scores"); it != root.end()) doc.scores = score_table_from_json(*it);
  if (const auto it = root.find("fitness"); it != root.end() && it->contains("total"))
    doc.total = it->at("total").get<double>();
  return doc;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

/// generation,best_fitness,population
inline std::string curves_csv(const std::vector<GenerationRecord>& records) {
  std::string out = "generation,best_fitness,population\n";
  for (const GenerationRecord& r : records)
    out += std::to_string(r.generation) + ',' + format_exact(r.best_fitness) + ',' + std::to_string(r.population) +
           '\n';
  return out;
}

inline constexpr std::string_view kSweepCsvHeader =
    "point,algorithm,seed,r_s,r_c,r_m,r_r,N_ini,N_max,G_max,best_fitness,run_seconds,errors";

/// One row per record; fitness at full precision, ratios at 2 decimals.
inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const SweepRecord& r : records) {
    const GaParams& p = r.params;
    out += std::to_string(r.point) + ',' + std::string(algorithm_name(r.algorithm)) + ',' + std::to_string(r.seed) +
           ',' + format_fixed2(p.r_s) + ',' + format_fixed2(p.r_c) + ',' + format_fixed2(p.r_m) + ',' +
           format_fixed2(p.r_r) + ',' + std::to_string(p.n_ini) + ',' + std::to_string(p.n_max) + ',' +
           std::to_string(p.g_max) + ',' + (r.ok() ? format_exact(r.best_fitness) : std::string()) + ',' +
           format_exact(r.run_seconds) + ',' + csv_escape(r.error) + '\n';
  }
  return out;
}

/// label,metric,count,average,max,min,stddev with labels `all` and `top<k>`.
inline std::string sweep_summary_csv(const SweepSummary& s) {
  std::string out = "label,metric,count,average,max,min,stddev\n";
  const std::string top = "top" + std::to_string(s.top_k);
  auto row = [&](const std::string& label, const char* metric, const Stats& st) {
    out += label + ',' + metric + ',' + std::to_string(st.count) + ',' + format_exact(st.mean) + ',' +
           format_exact(st.max) + ',' + format_exact(st.min) + ',' + format_exact(st.stddev) + '\n';
  };
  row("all", "fitness", s.fitness);
  row("all", "run_seconds", s.run_seconds);
  row(top, "fitness", s.top_fitness);
  row(top, "run_seconds", s.top_run_seconds);
  return out;
}

// ---------------------------------------------------------------------------
// Sweep grid file
// ---------------------------------------------------------------------------

struct GridFile {
  std::vector<SweepAxis> axes;
  std::vector<Exclusion> exclusions;
  std::size_t top_k = 10;
};

/// {"axes": [{"name", "center", "half_width", "step"} | {"name", "min", "max", "step"}],
///  "exclude": {"r_c": [0.23]}, "top_k": 10}
inline GridFile parse_grid_file(std::string_view text) {
  const json root = detail::parse_json(text, "grid");
  detail::require_object(root, "<root>");
  detail::reject_unknown_keys(root, {"axes", "exclude", "top_k"}, "");
  GridFile grid;

  const auto axes = root.find("axes");
  if (axes == root.end() || !axes->is_array() || axes->empty())
    throw ConfigError("grid needs a non-empty 'axes' array", "axes");
  for (std::size_t i = 0; i < axes->size(); ++i) {
    const json& a = (*axes)[i];
    const std::string scope = "axes[" + std::to_string(i) + "].";
    detail::require_object(a, scope.substr(0, scope.size() - 1));
    detail::reject_unknown_keys(a, {"name", "center", "half_width", "min", "max", "step"}, scope);
    if (!a.contains("name") || !a.at("name").is_string()) throw ConfigError("axis needs a 'name'", scope + "name");
    const auto ratio = parse_ratio(a.at("name").get<std::string>());
    if (!ratio) throw ConfigError("unknown ratio '" + a.at("name").get<std::string>() + "'", scope + "name");

    SweepAxis axis;
    axis.ratio = *ratio;
    detail::read_number(a, "step", axis.step, scope);
    if (a.contains("center")) {
      if (a.contains("min") || a.contains("max"))
        throw ConfigError("axis mixes center/half_width with min/max", scope + "center");
      detail::read_number(a, "center", axis.center, scope);
      detail::read_number(a, "half_width", axis.half_width, scope);
    } else if (a.contains("min") && a.contains("max")) {
      double lo = 0.0;
      double hi = 0.0;
      detail::read_number(a, "min", lo, scope);
      detail::read_number(a, "max", hi, scope);
      if (hi < lo) throw ConfigError("axis max < min", scope + "max");
      axis.center = (lo + hi) / 2.0;
      axis.half_width = (hi - lo) / 2.0;
    } else {
      throw ConfigError("axis needs center/half_width or min/max", scope + "center");
    }
    axis.validate();
    grid.axes.push_back(axis);
  }

  if (const auto ex = root.find("exclude"); ex != root.end()) {
    detail::require_object(*ex, "exclude");
    for (const auto& [name, values] : ex->items()) {
      const auto ratio = parse_ratio(name);
      if (!ratio) throw ConfigError("unknown ratio in exclude: '" + name + "'", "exclude." + name);
      if (!values.is_array()) throw ConfigError("exclude values must be an array", "exclude." + name);
      Exclusion e{*ratio, {}};
      for (const json& v : values) {
        if (!v.is_number()) throw ConfigError("exclude values must be numbers", "exclude." + name);
        e.values.push_back(v.get<double>());
      }
      grid.exclusions.push_back(std::move(e));
    }
  }

  if (root.contains("top_k")) {
    int k = 0;
    detail::read_number(root, "top_k", k);
    if (k < 1) throw ConfigError("'top_k' must be >= 1", "top_k");
    grid.top_k = static_cast<std::size_t>(k);
  }
  return grid;
}

inline GridFile load_grid_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("grid file not found: " + path.string());
  return parse_grid_file(read_file(path));
}

}  // namespace gantry::io
