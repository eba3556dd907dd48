// Command-line front end: run / crude / table1 / diagnose / plot-data.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "levyrare/levyrare.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapability = 3;

levyrare::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw levyrare::ConfigError("cannot open config " + path);
  try {
    return levyrare::parse_config(in);
  } catch (const levyrare::ConfigError& e) {
    throw levyrare::ConfigError(path + ": " + e.what());
  }
}

void report_params(const levyrare::ExperimentConfig& cfg) {
  if (cfg.kind != levyrare::EventKind::one_sided) return;
  for (double alpha : cfg.alphas) {
    const auto rep = levyrare::validate_params(cfg.algo, cfg.event, alpha);
    for (const auto& c : rep.checks)
      if (!c.holds && !c.vacuous)
        std::cerr << "warning: alpha=" << alpha << ": constraint " << c.name << " fails (" << c.detail << ")\n";
  }
}

levyrare::RunOptions stderr_options(bool timing) {
  levyrare::RunOptions opt;
  opt.record_wall_time = timing;
  opt.log = [](const std::string& s) { std::cerr << s << '\n'; };
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-event importance sampling for heavy-tailed Levy processes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  bool no_timing = false;

  auto* run = app.add_subcommand("run", "Run every cell of an experiment config and write the CSV");
  run->add_option("config", config_path, "INI config file")->required();
  run->add_option("-o,--output", output, "CSV path (overrides the config)");
  run->add_flag("--no-timing", no_timing, "Write 0 for wall_time_s so reruns are byte-identical");

  auto* crude = app.add_subcommand("crude", "Run only the crude Monte Carlo cells of a config");
  crude->add_option("config", config_path, "INI config file")->required();
  crude->add_option("-o,--output", output, "CSV path (overrides the config)");
  crude->add_flag("--no-timing", no_timing, "Write 0 for wall_time_s");

  std::vector<double> t_alpha{1.45, 1.6, 1.75};
  std::vector<std::uint64_t> t_n{200, 400, 600, 800, 1000};
  std::vector<std::string> t_modes{"algo2", "algo3", "crude"};
  std::uint64_t t_samples = 10000;
  std::uint64_t t_crude_max = 50'000'000;
  std::uint64_t t_seed = levyrare::ExperimentConfig{}.seed;
  std::string t_from;
  std::string t_csv;
  auto* table = app.add_subcommand("table1", "Relative-error table; runs the grid unless --from is given");
  table->add_option("--alpha", t_alpha, "Tail indices")->delimiter(',');
  table->add_option("--n", t_n, "Scaling parameters")->delimiter(',');
  table->add_option("--modes", t_modes, "Subset of algo2,algo3,crude")->delimiter(',');
  table->add_option("--samples", t_samples, "IS samples per cell");
  table->add_option("--crude-max-samples", t_crude_max, "Cap on crude samples per cell");
  table->add_option("--seed", t_seed, "Master seed");
  table->add_option("--from", t_from, "Render from an existing CSV instead of sampling");
  table->add_option("--csv", t_csv, "Also write the sampled cells to this CSV");
  table->add_flag("--no-timing", no_timing, "Write 0 for wall_time_s");

  std::string diag_config;
  auto* diagnose = app.add_subcommand("diagnose", "Empirical Lipschitz check of the small-jump increments");
  diagnose->add_option("config", diag_config, "INI config file (defaults when omitted)");

  std::string csv_in;
  auto* plot = app.add_subcommand("plot-data", "Emit the tidy CSV consumed by the plotting script");
  plot->add_option("csv", csv_in, "Harness CSV")->required();
  plot->add_option("-o,--output", output, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed() || crude->parsed()) {
      auto cfg = load_config(config_path);
      if (!output.empty()) cfg.output = output;
      report_params(cfg);
      auto opt = stderr_options(!no_timing);
      opt.only_crude = crude->parsed();
      const auto rows = levyrare::run_experiment(cfg, opt);
      std::cout << levyrare::render_table1(rows);
    } else if (table->parsed()) {
      std::vector<levyrare::RunSummary> rows;
      if (!t_from.empty()) {
        std::ifstream in(t_from);
        if (!in) throw levyrare::ConfigError("cannot open " + t_from);
        rows = levyrare::read_csv(in);
      } else {
        levyrare::ExperimentConfig cfg;
        cfg.alphas = t_alpha;
        cfg.ns = t_n;
        cfg.modes = t_modes;
        cfg.samples.is = t_samples;
        cfg.samples.crude_max = t_crude_max;
        cfg.seed = t_seed;
        cfg.output = t_csv;
        report_params(cfg);
        rows = levyrare::run_experiment(cfg, stderr_options(!no_timing));
      }
      std::cout << levyrare::render_table1(rows);
    } else if (diagnose->parsed()) {
      levyrare::ExperimentConfig cfg = diag_config.empty() ? levyrare::ExperimentConfig{} : load_config(diag_config);
      const auto model = levyrare::build_model(cfg.model, cfg.alphas.front());
      const auto rep = levyrare::lipschitz_diagnostic(model, cfg.diagnostic);
      std::cout << levyrare::render_lipschitz(rep);
      if (rep.any_flagged()) return kExitFailure;
    } else if (plot->parsed()) {
      std::ifstream in(csv_in);
      if (!in) throw levyrare::ConfigError("cannot open " + csv_in);
      const auto rows = levyrare::tidy_rows(levyrare::read_csv(in));
      if (output.empty()) {
        levyrare::write_csv(std::cout, rows);
      } else {
        levyrare::write_csv_file(output, rows);
      }
    }
  } catch (const levyrare::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const levyrare::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
