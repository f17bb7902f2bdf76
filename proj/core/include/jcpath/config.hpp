#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <stdexcept>

namespace jcpath {

// Parse or validation failure in a scenario config; carries the offending
// line (1-based, 0 when not tied to a line) and field name.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& what, int line, std::string field)
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  int line_;
  std::string field_;
};

enum class ScenarioKind {
  rabi_inversion,
  photon_average,
  exchange_probability,
  xi_table,
  dispersive_catprob,
  dispersive_states,
  oracle_check,
};

std::string to_string(ScenarioKind kind);

enum class TimeUnits { unspecified, inverse_g, seconds };

// One parameter: a fixed scalar or a sweep axis (list/lin). Sweep axes keep
// their declaration order, which fixes the row order of the output table.
struct GridSpec {
  std::vector<double> values;
  bool sweep = false;

  double scalar() const;  // requires a single fixed value
};

// Declarative description of one run: kind, parameter grid, units, and the
// sampling controls. Built by parse_config or by the preset catalog.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::rabi_inversion;
  TimeUnits units = TimeUnits::unspecified;
  std::vector<std::pair<std::string, GridSpec>> params;  // declaration order
  std::uint64_t seed = 0;
  bool seed_set = false;
  long shots = 0;  // 0: probabilities only, no sampling
  bool force_regime = false;           // dispersive: use the exact propagator
  bool single_cavity_reference = false;  // inversion: add theta = 0 column
  std::string source_name;             // preset name or file path

  const GridSpec* find(const std::string& key) const;
  double scalar_or(const std::string& key, double fallback) const;
  double required_scalar(const std::string& key) const;
};

// Strict parser for the flat key = value format ('#' comments; values are a
// number, lin(start, stop, steps), or list(v1, v2, ...)). Unknown keys for
// the declared scenario are errors, as are missing required keys or a
// missing units declaration when any time-valued key is present.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& source_name);

// Round-trippable normalized text form; parse_config(canonical_config(c))
// reproduces c exactly.
std::string canonical_config(const ScenarioConfig& c);

// FNV-1a over the canonical text; recorded in output provenance.
std::uint64_t config_hash(const ScenarioConfig& c);

// Deterministic shortest-clean decimal for doubles (chars_format::general,
// 17 significant digits); shared by CSV emission and canonical configs.
std::string format_double(double v);

}  // namespace jcpath
