// Command-line front end: one subcommand per experiment kind.
//
//   plap_lab <kind> --config run.cfg --out results/ [--seed N]
//
// Exit status: 0 success, 1 invalid configuration, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "plap/config.hpp"
#include "plap/error.hpp"
#include "plap/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference lab for the regularized parabolic normalized p-Laplacian"};
  app.set_version_flag("--version", plap::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;

  for (const auto kind : plap::all_kinds()) {
    auto* sub = app.add_subcommand(std::string(plap::kind_name(kind)), "run the " + std::string(plap::kind_name(kind)) +
                                                                           " experiment");
    sub->add_option("--config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory for report.json and CSV tables");
    sub->add_option("--seed", seed, "override data.seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto kind = plap::parse_kind(app.get_subcommands().front()->get_name());
  try {
    plap::ExperimentConfig cfg = plap::load_config(config_path, kind);
    if (seed) {
      cfg.seed = *seed;
      cfg.echo.emplace_back("data.seed", std::to_string(*seed));
    }
    plap::Report report = plap::run_experiment(cfg);
    plap::write_report(report, out_dir);
    std::cout << report.json["results"].dump() << '\n';
    return 0;
  } catch (const plap::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const plap::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const plap::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
