#include "jcpath/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include "jcpath/analytic.hpp"
#include "jcpath/dispersive.hpp"
#include "jcpath/measurement.hpp"
#include "jcpath/pipeline.hpp"

namespace jcpath {
namespace {

struct Axis {
  std::string name;
  const std::vector<double>* values;
};

struct Grid {
  std::vector<Axis> axes;
  std::size_t rows = 1;

  explicit Grid(const ScenarioConfig& c) {
    for (const auto& [key, spec] : c.params) {
      if (spec.sweep) {
        axes.push_back({key, &spec.values});
        rows *= spec.values.size();
      }
    }
  }
};

// All parameters of one grid row, scalars plus this row's axis values.
struct RowParams {
  std::vector<std::pair<std::string, double>> kv;

  const double* find(const std::string& key) const {
    for (const auto& [k, v] : kv)
      if (k == key) return &v;
    return nullptr;
  }
  double get(const std::string& key, double fallback) const {
    const double* v = find(key);
    return v ? *v : fallback;
  }
  double require(const std::string& key) const {
    const double* v = find(key);
    if (!v) throw ConfigError("missing required key '" + key + "'", 0, key);
    return *v;
  }
};

// Row-major over the sweep axes: the first declared axis moves slowest.
RowParams row_params(const ScenarioConfig& c, const Grid& grid,
                     std::size_t row) {
  std::vector<std::size_t> idx(grid.axes.size(), 0);
  std::size_t r = row;
  for (std::size_t k = grid.axes.size(); k-- > 0;) {
    const std::size_t n = grid.axes[k].values->size();
    idx[k] = r % n;
    r /= n;
  }
  RowParams p;
  p.kv.reserve(c.params.size());
  std::size_t axis = 0;
  for (const auto& [key, spec] : c.params) {
    if (spec.sweep) {
      p.kv.emplace_back(key, (*grid.axes[axis].values)[idx[axis]]);
      ++axis;
    } else {
      p.kv.emplace_back(key, spec.values.front());
    }
  }
  return p;
}

int as_index(double v, const std::string& field, long lo, long hi) {
  if (!(v >= static_cast<double>(lo)) || !(v <= static_cast<double>(hi)) ||
      v != std::floor(v)) {
    throw ConfigError("'" + field + "' must be an integer in [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]",
                      0, field);
  }
  return static_cast<int>(v);
}

double to_seconds(double value, TimeUnits units, double g_ref,
                  const std::string& field) {
  if (units == TimeUnits::inverse_g) {
    if (!(g_ref > 0.0))
      throw ConfigError("inverse_g units need a positive coupling", 0, field);
    return value / g_ref;
  }
  return value;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> provenance_lines(const ScenarioConfig& c) {
  std::vector<std::string> out;
  out.push_back(std::string("jcpath ") + kToolVersion +
                " scenario=" + to_string(c.kind) + " source=" +
                (c.source_name.empty() ? std::string("inline")
                                       : c.source_name));
  std::string units = "none";
  if (c.units == TimeUnits::inverse_g) {
    const char* clock =
        c.kind == ScenarioKind::dispersive_states ? "1/g" : "1/g0";
    units = std::string("inverse_g (declared times in ") + clock + ")";
  } else if (c.units == TimeUnits::seconds) {
    units = "seconds";
  }
  out.push_back("units: " + units);
  out.push_back("config fnv1a64: " + hash_hex(config_hash(c)));
  return out;
}

// Rows land at fixed indices, so the split over threads cannot reorder
// anything. The first exception wins; remaining rows still run.
void parallel_rows(std::size_t rows, int threads,
                   const std::function<void(std::size_t)>& fn) {
  const int capped = std::clamp(threads, 1, 64);
  if (capped <= 1 || rows < 2) {
    for (std::size_t r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= rows) return;
      try {
        fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n =
      std::min<std::size_t>(static_cast<std::size_t>(capped), rows);
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

RabiScenario rabi_from(const RowParams& p, TimeUnits units,
                       ScenarioKind kind) {
  RabiScenario s;
  const double quarter_pi = std::atan(1.0);
  s.theta = kind == ScenarioKind::exchange_probability
                ? p.get("theta", quarter_pi)
                : p.require("theta");
  s.phi = p.get("phi", 0.0);
  s.n0 = as_index(p.require("n0"), "n0", 0, 4096);
  s.n1 = as_index(p.require("n1"), "n1", 0, 4096);
  s.g0 = p.require("g0");
  s.g1 = p.require("g1");
  s.delta0 = p.get("delta0", 0.0);
  s.delta1 = p.get("delta1", 0.0);
  // Cavity frequencies must share one atom frequency; fill whichever side
  // is missing from the detunings.
  const double* w0 = p.find("omega0");
  const double* w1 = p.find("omega1");
  if (w0 && w1) {
    s.omega0 = *w0;
    s.omega1 = *w1;
  } else if (w0) {
    s.omega0 = *w0;
    s.omega1 = *w0 + s.delta0 - s.delta1;
  } else if (w1) {
    s.omega1 = *w1;
    s.omega0 = *w1 + s.delta1 - s.delta0;
  } else {
    const double base = 1.0 + std::max(0.0, s.delta1 - s.delta0);
    s.omega0 = base;
    s.omega1 = base + s.delta0 - s.delta1;
  }
  s.t_m = to_seconds(p.require("t_m"), units, s.g0, "t_m");
  s.t = to_seconds(p.require("t"), units, s.g0, "t");
  if (kind == ScenarioKind::exchange_probability &&
      std::abs(s.theta - quarter_pi) > 1e-12) {
    throw ConfigError("exchange_probability is defined at theta = pi/4", 0,
                      "theta");
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "");
  }
  return s;
}

void axis_columns(const Grid& grid, ResultTable& table) {
  for (const auto& axis : grid.axes) table.columns.push_back(axis.name);
}

std::vector<double> axis_values(const RowParams& p, const Grid& grid) {
  std::vector<double> out;
  out.reserve(grid.axes.size());
  for (const auto& axis : grid.axes) out.push_back(*p.find(axis.name));
  return out;
}

void eval_rabi_inversion(const ScenarioConfig& c, const Grid& grid,
                         ResultTable& table, int threads) {
  axis_columns(grid, table);
  table.columns.push_back("inversion");
  if (c.single_cavity_reference) table.columns.push_back("inversion_single");
  table.rows.assign(grid.rows, {});
  parallel_rows(grid.rows, threads, [&](std::size_t r) {
    const RowParams p = row_params(c, grid, r);
    const RabiScenario s = rabi_from(p, c.units, c.kind);
    std::vector<double> row = axis_values(p, grid);
    row.push_back(inversion(s));
    if (c.single_cavity_reference) {
      RabiScenario single = s;
      single.theta = 0.0;
      single.phi = 0.0;
      row.push_back(inversion(single));
    }
    table.rows[r] = std::move(row);
  });
}

void eval_photon_average(const ScenarioConfig& c, const Grid& grid,
                         ResultTable& table, int threads) {
  int field = -1;  // -1: report both cavities
  if (const GridSpec* f = c.find("field")) {
    if (f->sweep)
      throw ConfigError("'field' must be a fixed scalar", 0, "field");
    field = as_index(f->scalar(), "field", 0, 1);
  }
  axis_columns(grid, table);
  if (field < 0) {
    table.columns.push_back("photon0");
    table.columns.push_back("photon1");
  } else {
    table.columns.push_back("photon");
  }
  table.rows.assign(grid.rows, {});
  parallel_rows(grid.rows, threads, [&](std::size_t r) {
    const RowParams p = row_params(c, grid, r);
    const RabiScenario s = rabi_from(p, c.units, c.kind);
    std::vector<double> row = axis_values(p, grid);
    if (field < 0) {
      row.push_back(photon_average(s, 0));
      row.push_back(photon_average(s, 1));
    } else {
      row.push_back(photon_average(s, field));
    }
    table.rows[r] = std::move(row);
  });
}

void eval_exchange(const ScenarioConfig& c, const Grid& grid,
                   ResultTable& table, int threads) {
  axis_columns(grid, table);
  table.columns.push_back("exchange");
  table.rows.assign(grid.rows, {});
  parallel_rows(grid.rows, threads, [&](std::size_t r) {
    const RowParams p = row_params(c, grid, r);
    const RabiScenario s = rabi_from(p, c.units, c.kind);
    std::vector<double> row = axis_values(p, grid);
    row.push_back(exchange_probability(s));
    table.rows[r] = std::move(row);
  });
}

void eval_xi_table(const ScenarioConfig& c, const Grid& grid,
                   ResultTable& table, int threads) {
  axis_columns(grid, table);
  table.columns.push_back("norm0");
  for (int j = 1; j <= 8; ++j) {
    table.columns.push_back("xi" + std::to_string(j) + "_re");
    table.columns.push_back("xi" + std::to_string(j) + "_im");
  }
  table.rows.assign(grid.rows, {});
  parallel_rows(grid.rows, threads, [&](std::size_t r) {
    const RowParams p = row_params(c, grid, r);
    const RabiScenario s = rabi_from(p, c.units, c.kind);
    const XiCoefficients x = xi_coefficients(s);
    std::vector<double> row = axis_values(p, grid);
    row.push_back(x.norm0);
    for (const Complex& xi : x.xi) {
      row.push_back(xi.real());
      row.push_back(xi.imag());
    }
    table.rows[r] = std::move(row);
  });
}

void eval_catprob(const ScenarioConfig& c, const Grid& grid,
                  ResultTable& table, int threads) {
  axis_columns(grid, table);
  table.columns.push_back("probability");
  table.rows.assign(grid.rows, {});
  parallel_rows(grid.rows, threads, [&](std::size_t r) {
    const RowParams p = row_params(c, grid, r);
    const double Theta = p.require("Theta");
    const double alpha_sq = p.require("alpha_sq");
    if (alpha_sq < 0.0)
      throw ConfigError("'alpha_sq' must be nonnegative", 0, "alpha_sq");
    std::vector<double> row = axis_values(p, grid);
    row.push_back(double_cat_probability(Theta, alpha_sq));
    table.rows[r] = std::move(row);
  });
}

DispersiveScenario dispersive_from(const RowParams& p, TimeUnits units) {
  DispersiveScenario s;
  s.alpha = Complex(p.require("alpha_re"), p.get("alpha_im", 0.0));
  s.chi = p.get("chi", 0.0);
  s.m = as_index(p.get("m", 1.0), "m", 1, 1000000);
  const double g = p.require("g");
  const double delta = p.require("delta");
  const double omega = p.require("omega");
  s.params.omega_a = omega + delta;
  s.params.omega_0 = omega;
  s.params.omega_1 = omega;
  s.params.g0 = g;
  s.params.g1 = g;
  s.params.n_max = as_index(p.require("n_max"), "n_max", 1, 4096);
  s.T0 = to_seconds(p.get("T0", 0.0), units, g, "T0");
  const double after = to_seconds(p.get("t_after", 0.0), units, g, "t_after");
  s.t = s.T0 + s.t_m() + after;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "");
  }
  return s;
}

void eval_dispersive_states(const ScenarioConfig& c, const Grid& grid,
                            ResultTable& table) {
  if (!grid.axes.empty()) {
    throw ConfigError("dispersive_states takes fixed scalars, not sweeps", 0,
                      grid.axes.front().name);
  }
  const DispersiveScenario s = dispersive_from(row_params(c, grid, 0),
                                               c.units);
  const RegimeReport report = validate_regime(s);
  const bool exact = c.force_regime;
  if (!report.ok && !exact) throw RegimeRefusal(report.message);

  table.provenance.push_back(
      exact ? "propagation: exact (forced)" : "propagation: dispersive model");
  table.provenance.push_back(
      "control: 0 is '+', 1 is '-'; atom_basis: 0 is z, 1 is x; "
      "atom: 0 is e or +x, 1 is g or -x");

  const CompositeState evolved = dispersive_evolved_state(s, exact);
  const MeasurementBasis cb = control_basis(std::atan(1.0), 0.0);
  const std::vector<double> pc = outcome_probabilities(evolved, cb);

  table.columns = {"control", "atom_basis", "atom", "probability"};
  const bool sampled = c.shots > 0;
  if (sampled) table.columns.push_back("frequency");

  // 8 rows: control +/- crossed with atom read in z then x.
  std::vector<std::vector<double>> rows;
  for (int ci = 0; ci < 2; ++ci) {
    std::vector<std::vector<double>> conditional(2,
                                                 std::vector<double>(2, 0.0));
    if (pc[ci] > 1e-14) {
      const MeasurementRecord rec = measure(evolved, cb, ci);
      for (int bi = 0; bi < 2; ++bi) {
        const MeasurementBasis ab = bi == 0 ? atom_z_basis() : atom_x_basis();
        conditional[bi] = outcome_probabilities(rec.post_state, ab);
      }
    }
    for (int bi = 0; bi < 2; ++bi)
      for (int ai = 0; ai < 2; ++ai)
        rows.push_back({static_cast<double>(ci), static_cast<double>(bi),
                        static_cast<double>(ai),
                        pc[ci] * conditional[bi][ai]});
  }
  // Reorder to basis-major so each basis block is one distribution.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const std::vector<double>& a,
                      const std::vector<double>& b) { return a[1] < b[1]; });

  if (sampled) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int bi = 0; bi < 2; ++bi) {
      double total = 0.0;
      for (int cell = 0; cell < 4; ++cell) total += rows[4 * bi + cell][3];
      std::array<long, 4> counts{0, 0, 0, 0};
      for (long shot = 0; shot < c.shots; ++shot) {
        const double u = uniform(rng) * total;
        double cumulative = 0.0;
        int hit = 3;
        for (int cell = 0; cell < 4; ++cell) {
          cumulative += rows[4 * bi + cell][3];
          if (u < cumulative) {
            hit = cell;
            break;
          }
        }
        ++counts[hit];
      }
      for (int cell = 0; cell < 4; ++cell)
        rows[4 * bi + cell].push_back(static_cast<double>(counts[cell]) /
                                      static_cast<double>(c.shots));
    }
    table.provenance.push_back("seed: " + std::to_string(c.seed) +
                               " shots: " + std::to_string(c.shots));
  }
  table.rows = std::move(rows);
}

struct OracleTrial {
  RabiScenario s;
};

void eval_oracle_check(const ScenarioConfig& c, const Grid& grid,
                       ResultTable& table, int threads) {
  if (!grid.axes.empty()) {
    throw ConfigError("oracle_check takes fixed scalars, not sweeps", 0,
                      grid.axes.front().name);
  }
  const RowParams p = row_params(c, grid, 0);
  const int trials = as_index(p.get("trials", 200.0), "trials", 1, 100000);
  const int n_max = as_index(p.get("n_max", 8.0), "n_max", 7, 64);
  const double gt_max = p.get("gt_max", 20.0);
  if (!(gt_max > 0.0) || !std::isfinite(gt_max))
    throw ConfigError("'gt_max' must be positive", 0, "gt_max");
  const std::uint64_t seed = c.seed_set ? c.seed : 0x9e3779b97f4a7c15ull;

  // Draw every trial up front from one stream so the table is reproducible
  // regardless of threads. Runs with a tiny "+" probability are redrawn;
  // conditioned observables lose significance there.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> photon(0, 5);
  std::uniform_int_distribution<int> detuning_mode(0, 2);
  std::vector<OracleTrial> drawn;
  drawn.reserve(static_cast<std::size_t>(trials));
  const double pi = 4.0 * std::atan(1.0);
  for (int i = 0; i < trials; ++i) {
    RabiScenario s;
    for (int attempt = 0;; ++attempt) {
      s.theta = 0.5 * pi * uniform(rng);
      s.phi = 2.0 * pi * uniform(rng);
      s.n0 = photon(rng);
      s.n1 = photon(rng);
      s.g0 = 0.05 + 0.95 * uniform(rng);
      s.g1 = 0.05 + 0.95 * uniform(rng);
      const int mode0 = detuning_mode(rng);
      const int mode1 = detuning_mode(rng);
      s.delta0 = mode0 == 0 ? 0.0 : (mode0 == 1 ? 0.3 : -0.3) * s.g0;
      s.delta1 = mode1 == 0 ? 0.0 : (mode1 == 1 ? 0.3 : -0.3) * s.g1;
      const double base =
          0.7 + 0.6 * uniform(rng) + std::max(0.0, s.delta1 - s.delta0);
      s.omega0 = base;
      s.omega1 = base + s.delta0 - s.delta1;
      const double gt = gt_max * std::max(uniform(rng), 1e-3);
      s.t = gt / std::max(s.g0, s.g1);
      s.t_m = s.t * uniform(rng);
      if (norm_n0(s) >= 0.05) break;
      if (attempt > 200)
        throw std::logic_error("oracle sampling failed to find a usable run");
    }
    drawn.push_back({s});
  }

  table.provenance.push_back("seed: " + std::to_string(seed) +
                             " trials: " + std::to_string(trials));
  table.provenance.push_back(
      "deviations: propagator is max-norm against the exponential of the "
      "full generator; the rest are analytic minus simulated");

  table.columns = {"trial",  "theta",  "phi",    "n0",
                   "n1",     "g0",     "g1",     "delta0",
                   "delta1", "t_m",    "t",      "dev_propagator",
                   "dev_inversion",    "dev_photon",
                   "dev_xi", "dev_norm"};
  table.rows.assign(drawn.size(), {});
  parallel_rows(drawn.size(), threads, [&](std::size_t r) {
    const RabiScenario& s = drawn[r].s;
    const SystemParams sp = s.params(n_max);

    const Propagator closed = controlled_propagator(sp, 0.0, s.t);
    const OperatorMatrix full(free_hamiltonian(sp).matrix() +
                              interaction_hamiltonian(sp).matrix());
    const Propagator reference = numeric_expm(full, s.t);
    const double dev_prop =
        (closed.matrix.matrix() - reference.matrix.matrix())
            .cwiseAbs()
            .maxCoeff();

    const double dev_inversion =
        std::abs(inversion(s) - simulated_inversion(s, n_max));
    const double dev_photon = std::max(
        std::abs(photon_average(s, 0) - simulated_photon_average(s, n_max, 0)),
        std::abs(photon_average(s, 1) -
                 simulated_photon_average(s, n_max, 1)));

    const XiCoefficients analytic = xi_coefficients(s);
    const XiCoefficients simulated = simulated_xi(s, n_max);
    double dev_xi = 0.0;
    double xi_weight = 0.0;
    for (int j = 0; j < 8; ++j) {
      dev_xi = std::max(dev_xi, std::abs(analytic.xi[j] - simulated.xi[j]));
      xi_weight += std::norm(analytic.xi[j]);
    }
    const double dev_norm = std::max(
        std::abs(xi_weight / (analytic.norm0 * analytic.norm0) - 1.0),
        std::abs(analytic.norm0 - simulated.norm0));

    table.rows[r] = {static_cast<double>(r + 1),
                     s.theta,
                     s.phi,
                     static_cast<double>(s.n0),
                     static_cast<double>(s.n1),
                     s.g0,
                     s.g1,
                     s.delta0,
                     s.delta1,
                     s.t_m,
                     s.t,
                     dev_prop,
                     dev_inversion,
                     dev_photon,
                     dev_xi,
                     dev_norm};
  });
}

}  // namespace

ResultTable run_scenario(const ScenarioConfig& config, int threads) {
  const Grid grid(config);
  if (grid.rows == 0)
    throw ConfigError("a sweep axis has no values", 0, "");
  ResultTable table;
  table.provenance = provenance_lines(config);
  switch (config.kind) {
    case ScenarioKind::rabi_inversion:
      eval_rabi_inversion(config, grid, table, threads);
      break;
    case ScenarioKind::photon_average:
      eval_photon_average(config, grid, table, threads);
      break;
    case ScenarioKind::exchange_probability:
      eval_exchange(config, grid, table, threads);
      break;
    case ScenarioKind::xi_table:
      eval_xi_table(config, grid, table, threads);
      break;
    case ScenarioKind::dispersive_catprob:
      eval_catprob(config, grid, table, threads);
      break;
    case ScenarioKind::dispersive_states:
      eval_dispersive_states(config, grid, table);
      break;
    case ScenarioKind::oracle_check:
      eval_oracle_check(config, grid, table, threads);
      break;
  }
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::logic_error("ragged result table");
    for (double v : row)
      if (!std::isfinite(v)) throw std::logic_error("non-finite result cell");
  }
  return table;
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (const auto& line : table.provenance) {
    out += "# ";
    out += line;
    out += '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void enforce_oracle_tolerance(const ResultTable& table, double tolerance) {
  double worst = 0.0;
  std::string worst_column;
  bool any = false;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (table.columns[j].rfind("dev_", 0) != 0) continue;
    any = true;
    for (const auto& row : table.rows) {
      if (row[j] > worst) {
        worst = row[j];
        worst_column = table.columns[j];
      }
    }
  }
  if (!any)
    throw std::logic_error("table has no deviation columns to enforce");
  if (worst > tolerance) {
    throw OracleCheckFailure("worst deviation " + format_double(worst) +
                             " in column '" + worst_column +
                             "' exceeds tolerance " +
                             format_double(tolerance));
  }
}

}  // namespace jcpath
