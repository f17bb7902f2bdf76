#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "jcpath/hilbert.hpp"
#include "jcpath/presets.hpp"
#include "jcpath/scenarios.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + out_path + "'");
}

void apply_seed_override(jcpath::ScenarioConfig& config,
                         const std::optional<std::uint64_t>& seed) {
  if (seed) {
    config.seed = *seed;
    config.seed_set = true;
  }
}

// The oracle config carries its own tolerance; runs fail loudly when the
// analytic layer drifts from the simulation.
void enforce_if_oracle(const jcpath::ScenarioConfig& config,
                       const jcpath::ResultTable& table) {
  if (config.kind != jcpath::ScenarioKind::oracle_check) return;
  jcpath::enforce_oracle_tolerance(table,
                                   config.scalar_or("tolerance", 1e-9));
}

void print_deviation_summary(const jcpath::ResultTable& table) {
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (table.columns[j].rfind("dev_", 0) != 0) continue;
    double worst = 0.0;
    for (const auto& row : table.rows) worst = std::max(worst, row[j]);
    std::cerr << "  " << table.columns[j]
              << " max: " << jcpath::format_double(worst) << "\n";
  }
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const jcpath::RegimeRefusal& e) {
    std::cerr << "regime refusal: " << e.what() << "\n";
    return 3;
  } catch (const jcpath::OracleCheckFailure& e) {
    std::cerr << "oracle check failed: " << e.what() << "\n";
    return 4;
  } catch (const jcpath::ConfigError& e) {
    std::cerr << "config error";
    if (e.line() > 0) std::cerr << " at line " << e.line();
    if (!e.field().empty()) std::cerr << " (key '" << e.field() << "')";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const jcpath::TruncationError& e) {
    std::cerr << "config error: " << e.what() << " (needs n_max >= "
              << e.required_n_max() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditioned dynamics of an atom crossing two cavities in "
               "superposition"};
  app.require_subcommand(1);

  int threads = 1;
  std::optional<std::uint64_t> seed;
  app.add_option("--threads", threads, "worker threads for grid evaluation")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app.add_option("--seed", seed, "override the config seed");

  std::string config_path;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "evaluate a scenario config file");
  run->add_option("config", config_path, "path to the config file")
      ->required();
  run->add_option("--out", run_out, "write the CSV here instead of stdout");

  std::string preset_name;
  std::string preset_out;
  bool show_config = false;
  CLI::App* preset = app.add_subcommand("preset", "evaluate a built-in panel");
  preset->add_option("name", preset_name, "preset name; see list-presets")
      ->required();
  preset->add_option("--out", preset_out,
                     "write the CSV here instead of stdout");
  preset->add_flag("--show-config", show_config,
                   "print the preset's config text and exit");

  CLI::App* list = app.add_subcommand("list-presets", "list built-in panels");

  int check_trials = 200;
  int check_n_max = 8;
  double check_gt_max = 20.0;
  double check_tolerance = 1e-9;
  CLI::App* check = app.add_subcommand(
      "check", "randomized closed-form versus simulation cross-check");
  check->add_option("--trials", check_trials, "randomized runs")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  check->add_option("--n-max", check_n_max, "photon cutoff per cavity")
      ->check(CLI::Range(7, 64))
      ->capture_default_str();
  check->add_option("--gt-max", check_gt_max, "largest sampled g t")
      ->capture_default_str();
  check->add_option("--tolerance", check_tolerance, "failure threshold")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return guarded([&] {
      jcpath::ScenarioConfig config =
          jcpath::parse_config(read_file(config_path), config_path);
      apply_seed_override(config, seed);
      const jcpath::ResultTable table = jcpath::run_scenario(config, threads);
      write_output(jcpath::to_csv(table), run_out);
      enforce_if_oracle(config, table);
      return 0;
    });
  }

  if (preset->parsed()) {
    return guarded([&] {
      if (show_config) {
        write_output(jcpath::preset_text(preset_name), preset_out);
        return 0;
      }
      jcpath::ScenarioConfig config = jcpath::preset_config(preset_name);
      apply_seed_override(config, seed);
      const jcpath::ResultTable table = jcpath::run_scenario(config, threads);
      write_output(jcpath::to_csv(table), preset_out);
      return 0;
    });
  }

  if (list->parsed()) {
    for (const auto& name : jcpath::preset_names()) std::cout << name << "\n";
    return 0;
  }

  if (check->parsed()) {
    return guarded([&] {
      jcpath::ScenarioConfig config;
      config.kind = jcpath::ScenarioKind::oracle_check;
      config.source_name = "check";
      config.params = {
          {"trials", {{static_cast<double>(check_trials)}, false}},
          {"n_max", {{static_cast<double>(check_n_max)}, false}},
          {"gt_max", {{check_gt_max}, false}},
          {"tolerance", {{check_tolerance}, false}},
      };
      apply_seed_override(config, seed);
      const jcpath::ResultTable table = jcpath::run_scenario(config, threads);
      print_deviation_summary(table);
      jcpath::enforce_oracle_tolerance(table, check_tolerance);
      std::cout << "oracle check passed: " << check_trials
                << " randomized runs within "
                << jcpath::format_double(check_tolerance) << "\n";
      return 0;
    });
  }

  return 0;
}
