#include <iostream>

#include <CLI11.hpp>
#include <omp.h>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace jdisc::cli;
  CLI::App app{"J-holomorphic disc solver"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions opts;
  int threads = 0;
  for (const char* name : {"solve", "family", "probe", "converge"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "OpenMP threads (0: all)");
    sub->add_option("--seed", opts.seed, "seed for sampled Hoelder pairs and spot checks");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (threads > 0) omp_set_num_threads(threads);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Config cfg = load_config(config_path);
    json report;
    if (command == "solve") report = cmd_solve(cfg, opts);
    else if (command == "family") report = cmd_family(cfg, opts);
    else if (command == "probe") report = cmd_probe(cfg, opts);
    else report = cmd_converge(cfg, opts);
    std::cout << "wrote " << opts.out_dir << "/" << command << ".json\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const jdisc::SolverError& e) {
    std::cerr << "solver failure (" << jdisc::to_string(e.kind()) << "): " << e.what()
              << " [last residual " << e.last_residual() << "]\n";
    return 2;
  } catch (const jdisc::Error& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
