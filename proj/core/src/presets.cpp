#include "jcpath/presets.hpp"

#include <cmath>
#include <initializer_list>
#include <map>

namespace jcpath {
namespace {

std::string num(double v) { return format_double(v); }

std::string lin(double start, double stop, int steps) {
  return "lin(" + num(start) + ", " + num(stop) + ", " +
         std::to_string(steps) + ")";
}

std::string list(std::initializer_list<double> values) {
  std::string out = "list(";
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    out += num(v);
    first = false;
  }
  return out + ")";
}

const std::map<std::string, std::string>& catalog() {
  static const std::map<std::string, std::string> presets = [] {
    std::map<std::string, std::string> out;
    const double pi = M_PI;

    // Two-zone inversion panels, times in 1/g.
    auto inversion = [&](const std::string& theta, const std::string& t_m,
                         const std::string& t, int n, double g,
                         bool single_reference) {
      std::string s = "scenario = rabi_inversion\nunits = inverse_g\n";
      s += "theta = " + theta + "\nphi = 0\n";
      s += "n0 = " + std::to_string(n) + "\nn1 = " + std::to_string(n) + "\n";
      s += "g0 = " + num(g) + "\ng1 = " + num(g) + "\n";
      if (single_reference) s += "single_cavity_reference = true\n";
      s += "t_m = " + t_m + "\nt = " + t + "\n";
      return s;
    };
    out["fig2a"] = inversion(list({0.0, pi / 8, pi / 4}), num(pi / 2),
                             lin(pi / 2, pi / 2 + 4 * pi, 201), 0, 0.2, false);
    out["fig2b"] =
        inversion(num(pi / 4), list({0.0, pi / 4, pi / 2, 3 * pi / 4, pi}),
                  lin(pi, 5 * pi, 201), 0, 0.2, false);
    out["fig3a"] = inversion(num(pi / 4), num(pi), lin(pi, 7 * pi, 301), 1,
                             0.2, true);
    out["fig3b"] = inversion(num(pi / 4), num(pi), lin(pi, 7 * pi, 301), 5,
                             0.2, true);
    out["fig5"] = inversion(num(pi / 4), lin(0.0, 4 * pi, 81),
                            lin(4 * pi, 8 * pi, 81), 1, 0.2, false);

    // Conditioned photon numbers against the preparation angle, in seconds.
    auto photon = [&](int n, int field) {
      std::string s = "scenario = photon_average\nunits = seconds\n";
      s += "theta = " + list({0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2}) + "\n";
      s += "phi = 0\n";
      s += "n0 = " + std::to_string(n) + "\nn1 = " + std::to_string(n) + "\n";
      s += "g0 = " + num(0.5) + "\ng1 = " + num(0.5) + "\n";
      s += "field = " + std::to_string(field) + "\n";
      s += "t_m = " + num(pi / 2) + "\nt = " +
           lin(pi / 2, pi / 2 + 8 * pi, 301) + "\n";
      return s;
    };
    out["fig4a"] = photon(0, 0);
    out["fig4b"] = photon(0, 1);
    out["fig4c"] = photon(10, 0);
    out["fig4d"] = photon(10, 1);

    // Exchange probability panels, times in 1/g.
    auto exchange = [&](int n0, int n1, const std::string& t_m,
                        const std::string& t, double g) {
      std::string s = "scenario = exchange_probability\nunits = inverse_g\n";
      s += "n0 = " + std::to_string(n0) + "\nn1 = " + std::to_string(n1) +
           "\n";
      s += "g0 = " + num(g) + "\ng1 = " + num(g) + "\n";
      s += "t_m = " + t_m + "\nt = " + t + "\n";
      return s;
    };
    const double sweep_end = 64 * pi / 5;
    out["fig6a"] =
        exchange(1, 0, lin(0.0, sweep_end, 401), num(sweep_end), 0.2);
    out["fig6b"] =
        exchange(10, 0, lin(0.0, sweep_end, 401), num(sweep_end), 0.2);
    out["fig6c"] =
        exchange(1, 1, lin(0.0, sweep_end, 401), num(sweep_end), 0.2);
    out["fig6d"] =
        exchange(10, 10, lin(0.0, sweep_end, 401), num(sweep_end), 0.2);
    out["fig7"] = exchange(1, 1, lin(0.0, 4 * pi, 81), lin(4 * pi, 8 * pi, 81),
                           0.2);

    // Double-cat probability surface over the phase parameter and photon
    // budget.
    out["fig8"] = std::string("scenario = dispersive_catprob\n") +
                  "Theta = " + lin(0.0, 2 * pi * 127.0 / 128.0, 128) + "\n" +
                  "alpha_sq = " + lin(0.05, 5.0, 100) + "\n";
    return out;
  }();
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  names.reserve(catalog().size());
  for (const auto& [name, text] : catalog()) names.push_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  const auto& presets = catalog();
  auto it = presets.find(name);
  if (it == presets.end())
    throw ConfigError("unknown preset '" + name + "'", 0, "preset");
  return it->second;
}

ScenarioConfig preset_config(const std::string& name) {
  return parse_config(preset_text(name), "preset:" + name);
}

}  // namespace jcpath
