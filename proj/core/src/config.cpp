#include "jcpath/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace jcpath {
namespace {

struct KindInfo {
  std::set<std::string> allowed;
  std::set<std::string> required;
  std::set<std::string> time_valued;
};

const std::map<std::string, ScenarioKind>& kind_names() {
  static const std::map<std::string, ScenarioKind> m = {
      {"rabi_inversion", ScenarioKind::rabi_inversion},
      {"photon_average", ScenarioKind::photon_average},
      {"exchange_probability", ScenarioKind::exchange_probability},
      {"xi_table", ScenarioKind::xi_table},
      {"dispersive_catprob", ScenarioKind::dispersive_catprob},
      {"dispersive_states", ScenarioKind::dispersive_states},
      {"oracle_check", ScenarioKind::oracle_check},
  };
  return m;
}

const KindInfo& kind_info(ScenarioKind kind) {
  static const std::set<std::string> rabi_keys = {
      "theta", "phi",    "n0",     "n1",     "g0", "g1",
      "delta0", "delta1", "omega0", "omega1", "t_m", "t"};
  static const KindInfo rabi{
      rabi_keys, {"theta", "n0", "n1", "g0", "g1", "t_m", "t"}, {"t_m", "t"}};
  static const KindInfo photon = [] {
    KindInfo k = rabi;
    k.allowed.insert("field");
    return k;
  }();
  static const KindInfo exchange{
      rabi_keys, {"n0", "n1", "g0", "g1", "t_m", "t"}, {"t_m", "t"}};
  static const KindInfo catprob{{"Theta", "alpha_sq"}, {"Theta", "alpha_sq"},
                                {}};
  static const KindInfo states{{"alpha_re", "alpha_im", "chi", "m", "T0",
                                "t_after", "g", "delta", "omega", "n_max"},
                               {"alpha_re", "g", "delta", "omega", "n_max"},
                               {"T0", "t_after"}};
  static const KindInfo oracle{
      {"trials", "n_max", "tolerance", "gt_max"}, {}, {}};
  switch (kind) {
    case ScenarioKind::rabi_inversion:
      return rabi;
    case ScenarioKind::photon_average:
      return photon;
    case ScenarioKind::exchange_probability:
      return exchange;
    case ScenarioKind::xi_table:
      return rabi;
    case ScenarioKind::dispersive_catprob:
      return catprob;
    case ScenarioKind::dispersive_states:
      return states;
    case ScenarioKind::oracle_check:
      return oracle;
  }
  throw std::logic_error("unhandled scenario kind");
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, int line, const std::string& key) {
  std::string t = trim(tok);
  if (t.empty()) throw ConfigError("empty number", line, key);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("'" + t + "' is not a number", line, key);
  if (!std::isfinite(v))
    throw ConfigError("'" + t + "' is not finite", line, key);
  return v;
}

std::vector<std::string> split_args(const std::string& inner) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : inner) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

GridSpec parse_value(const std::string& raw, int line, const std::string& key) {
  std::string v = trim(raw);
  GridSpec g;
  auto call = [&](const char* name) -> std::optional<std::string> {
    std::string prefix = std::string(name) + "(";
    if (v.rfind(prefix, 0) == 0 && v.back() == ')')
      return v.substr(prefix.size(), v.size() - prefix.size() - 1);
    return std::nullopt;
  };
  if (auto inner = call("lin")) {
    auto args = split_args(*inner);
    if (args.size() != 3)
      throw ConfigError("lin(start, stop, steps) takes three arguments", line,
                        key);
    double start = parse_number(args[0], line, key);
    double stop = parse_number(args[1], line, key);
    double steps_d = parse_number(args[2], line, key);
    long steps = std::lround(steps_d);
    if (steps < 1 || double(steps) != steps_d)
      throw ConfigError("lin steps must be a positive integer", line, key);
    g.sweep = true;
    g.values.resize(steps);
    if (steps == 1) {
      g.values[0] = start;
    } else {
      double h = (stop - start) / double(steps - 1);
      for (long i = 0; i < steps; ++i) g.values[i] = start + h * double(i);
      g.values[steps - 1] = stop;  // exact endpoint
    }
    return g;
  }
  if (auto inner = call("list")) {
    auto args = split_args(*inner);
    g.sweep = true;
    for (const auto& a : args) g.values.push_back(parse_number(a, line, key));
    if (g.values.empty()) throw ConfigError("empty list", line, key);
    return g;
  }
  g.values.push_back(parse_number(v, line, key));
  return g;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("'" + v + "' is not a boolean", line, key);
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  for (const auto& [name, k] : kind_names())
    if (k == kind) return name;
  return "unknown";
}

double GridSpec::scalar() const {
  if (sweep || values.size() != 1)
    throw std::logic_error("parameter is a sweep axis, expected a scalar");
  return values[0];
}

const GridSpec* ScenarioConfig::find(const std::string& key) const {
  for (const auto& [k, g] : params)
    if (k == key) return &g;
  return nullptr;
}

double ScenarioConfig::scalar_or(const std::string& key,
                                 double fallback) const {
  const GridSpec* g = find(key);
  if (!g) return fallback;
  if (g->sweep || g->values.size() != 1)
    throw ConfigError("'" + key + "' must be a fixed value here", 0, key);
  return g->values[0];
}

double ScenarioConfig::required_scalar(const std::string& key) const {
  const GridSpec* g = find(key);
  if (!g) throw ConfigError("missing required key '" + key + "'", 0, key);
  if (g->sweep || g->values.size() != 1)
    throw ConfigError("'" + key + "' must be a fixed value here", 0, key);
  return g->values[0];
}

ScenarioConfig parse_config(const std::string& text,
                            const std::string& source_name) {
  ScenarioConfig c;
  c.source_name = source_name;
  bool kind_seen = false;
  std::set<std::string> seen;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::vector<std::tuple<std::string, std::string, int>> entries;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value", line_no, "");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no, "");
    if (!seen.insert(key).second)
      throw ConfigError("duplicate key '" + key + "'", line_no, key);
    if (key == "scenario") {
      auto it = kind_names().find(value);
      if (it == kind_names().end())
        throw ConfigError("unknown scenario '" + value + "'", line_no, key);
      c.kind = it->second;
      kind_seen = true;
      continue;
    }
    entries.emplace_back(key, value, line_no);
  }
  if (!kind_seen) throw ConfigError("missing 'scenario' key", 0, "scenario");

  const KindInfo& info = kind_info(c.kind);
  bool has_time_key = false;
  for (const auto& [key, value, ln] : entries) {
    if (key == "units") {
      if (value == "inverse_g")
        c.units = TimeUnits::inverse_g;
      else if (value == "seconds")
        c.units = TimeUnits::seconds;
      else
        throw ConfigError("units must be inverse_g or seconds", ln, key);
      continue;
    }
    if (key == "seed") {
      double v = parse_number(value, ln, key);
      if (v < 0 || v != std::floor(v))
        throw ConfigError("seed must be a non-negative integer", ln, key);
      c.seed = std::uint64_t(v);
      c.seed_set = true;
      continue;
    }
    if (key == "shots") {
      double v = parse_number(value, ln, key);
      if (v < 1 || v != std::floor(v))
        throw ConfigError("shots must be a positive integer", ln, key);
      c.shots = long(v);
      continue;
    }
    if (key == "force_regime") {
      c.force_regime = parse_bool(value, ln, key);
      continue;
    }
    if (key == "single_cavity_reference") {
      c.single_cavity_reference = parse_bool(value, ln, key);
      continue;
    }
    if (!info.allowed.count(key))
      throw ConfigError("key '" + key + "' does not apply to scenario " +
                            to_string(c.kind),
                        ln, key);
    if (info.time_valued.count(key)) has_time_key = true;
    c.params.emplace_back(key, parse_value(value, ln, key));
  }

  for (const auto& req : info.required)
    if (!c.find(req))
      throw ConfigError("scenario " + to_string(c.kind) +
                            " requires key '" + req + "'",
                        0, req);
  if (has_time_key && c.units == TimeUnits::unspecified)
    throw ConfigError(
        "time-valued keys need a units declaration (inverse_g or seconds)", 0,
        "units");
  if (c.shots > 0 && !c.seed_set)
    throw ConfigError("sampling (shots) requires an explicit seed", 0, "seed");
  return c;
}

std::string canonical_config(const ScenarioConfig& c) {
  std::string out = "scenario = " + to_string(c.kind) + "\n";
  if (c.units == TimeUnits::inverse_g) out += "units = inverse_g\n";
  if (c.units == TimeUnits::seconds) out += "units = seconds\n";
  for (const auto& [key, g] : c.params) {
    out += key + " = ";
    if (!g.sweep) {
      out += format_double(g.values[0]);
    } else {
      out += "list(";
      for (size_t i = 0; i < g.values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(g.values[i]);
      }
      out += ")";
    }
    out += "\n";
  }
  if (c.seed_set) out += "seed = " + std::to_string(c.seed) + "\n";
  if (c.shots > 0) out += "shots = " + std::to_string(c.shots) + "\n";
  if (c.force_regime) out += "force_regime = true\n";
  if (c.single_cavity_reference) out += "single_cavity_reference = true\n";
  return out;
}

std::uint64_t config_hash(const ScenarioConfig& c) {
  std::string s = canonical_config(c);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::logic_error("non-finite value in output");
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::logic_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace jcpath
