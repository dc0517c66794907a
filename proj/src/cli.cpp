#include "nlmc/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <ostream>

#include "nlmc/errors.hpp"
#include "nlmc/experiments.hpp"

namespace nlmc {

namespace {

constexpr int kConfigError = 1;
constexpr int kSolverError = 2;

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-local multicontinuum upscaling for dual-continuum diffusion", "nlmc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::function<int(const ExperimentConfig&, const std::filesystem::path&)> action;

  auto add = [&](const std::string& name, const std::string& help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "Experiment config file")->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides [output] dir)");
    sub->callback([&action, fn] { action = fn; });
  };

  add("generate-media", "Write generated media fields and their manifest",
      [&out](const ExperimentConfig& c, const std::filesystem::path& dir) {
        out << "media manifest: " << run_generate_media(c, dir).string() << '\n';
        return 0;
      });
  add("run-static", "Steady-state fine and NLMC solves with error report",
      [&out](const ExperimentConfig& c, const std::filesystem::path& dir) {
        const auto r = run_static_experiment(c, dir);
        out << "H=1/" << r.report.n_coarse << " m=" << r.report.layers
            << " e1=" << format_percent(r.report.error[0]) << "% e2=" << format_percent(r.report.error[1])
            << "%\n";
        return 0;
      });
  add("run-transient", "Backward Euler fine and NLMC runs with error series",
      [&out](const ExperimentConfig& c, const std::filesystem::path& dir) {
        const auto r = run_transient_experiment(c, dir);
        out << "steps=" << r.times.size() - 1 << " final e1=" << format_percent(r.report.error[0])
            << "% e2=" << format_percent(r.report.error[1]) << "%\n";
        return 0;
      });
  add("decay-study", "Global against localized basis energy differences",
      [&out](const ExperimentConfig& c, const std::filesystem::path& dir) {
        for (const auto& row : run_decay_study(c, dir)) {
          out << "m=" << row.layers << " difference=" << row.difference << " tail=" << row.tail << '\n';
        }
        return 0;
      });
  add("sweep", "Static experiment over a (H, m) schedule",
      [&out](const ExperimentConfig& c, const std::filesystem::path& dir) {
        const auto rows = run_sweep(c, dir);
        bool same_h = true;
        for (const auto& r : rows) same_h = same_h && r.n_coarse == rows.front().n_coarse;
        write_error_csv(out, rows, same_h && rows.size() > 1);
        return 0;
      });
  add("validate-config", "Parse and check a config file",
      [&out](const ExperimentConfig& c, const std::filesystem::path&) {
        out << "config ok (grid 1/" << c.n_coarse << " x " << c.refine << ")\n";
        return 0;
      });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    const ExperimentConfig config = load_config(config_path);
    validate(config);
    const std::filesystem::path dir = std::filesystem::path(out_dir.empty() ? config.output_dir : out_dir);
    return action(config, dir);
  } catch (const InputError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kSolverError;
  }
}

}  // namespace nlmc
