#include <CLI11.hpp>
#include <iostream>

#include "ibvp/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-level reconstruction of piecewise-constant squared slowness from Helmholtz DtN data"};
  app.require_subcommand(1);

  std::string config;
  ibvp::RunOptions opt;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"forward", "synthesise DtN data for the truth field"},
      {"reconstruct", "multi-level projected steepest descent"},
      {"verify", "run the oracle suite"},
      {"constants", "level constants, rho tables and N_max"},
      {"calibrate", "fit lhat0, l0 and K empirically"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "INI configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override run.seed");
    sub->add_flag("--override-level-check", opt.override_level_check,
                  "downgrade failed level-transition conditions to warnings");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ibvp::exit_code::usage;
  }

  CLI::App* sub = app.get_subcommands().front();
  opt.out_dir = out_dir;
  if (sub->count("--seed")) opt.seed = seed;
  return ibvp::run_command(sub->get_name(), config, opt, std::cout, std::cerr);
}
