// Command-line front end: five subcommands over one config-file format.
//
//   diracbloch bands       --config cfg [--out DIR] [--threads N] [--seed U64]
//   diracbloch thomas-scan --config cfg ...
//   diracbloch norms       --config cfg ...
//   diracbloch gauge-check --config cfg ...
//   diracbloch verify      --config cfg ...
//
// DIRACBLOCH_OUT sets the default output directory. Exit codes: 0 success,
// 1 parse/precondition error, 2 failed assertion in `verify`.

#include "diracbloch/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for periodic magnetic Dirac operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::uint64_t seed = 1;
  if (const char* env = std::getenv("DIRACBLOCH_OUT")) out_dir = env;
  if (out_dir.empty()) out_dir = "out";

  const std::vector<std::string> names = {"bands", "thomas-scan", "norms", "gauge-check", "verify"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads for sweeps");
    sub->add_option("--seed", seed, "seed for random test vectors");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const diracbloch::Config cfg = diracbloch::Config::parse_file(config_path);
    diracbloch::RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    opt.seed = seed;
    const std::string sub = app.get_subcommands().front()->get_name();
    return diracbloch::run_subcommand(sub, cfg, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
