#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "accmm/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"accmm: accelerated momentum methods for mini and minimax optimization"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", run_config, "config file path")->required();

  std::string agg_dir;
  CLI::App* agg = app.add_subcommand("aggregate", "aggregate seed traces in a directory");
  agg->add_option("dir", agg_dir, "directory holding *_seed*.csv traces")->required();

  std::string check_config_path;
  CLI::App* check = app.add_subcommand("check", "print the theory-condition report for a config");
  check->add_option("config", check_config_path, "config file path")->required();

  std::string gen_config;
  CLI::App* gen = app.add_subcommand("gen-data", "export the config's dataset as CSV");
  gen->add_option("config", gen_config, "config file path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return accmm::run_experiment(run_config, std::cerr);
  if (agg->parsed()) return accmm::aggregate_seeds(agg_dir, std::cerr);
  if (check->parsed()) {
    try {
      const accmm::RunConfig cfg = accmm::parse_config_file(check_config_path);
      std::cout << accmm::check_config(cfg).to_text();
      return accmm::kExitOk;
    } catch (const accmm::config_error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return accmm::kExitConfig;
    } catch (const accmm::contract_error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return accmm::kExitConfig;
    }
  }
  if (gen->parsed()) {
    try {
      const accmm::RunConfig cfg = accmm::parse_config_file(gen_config);
      return accmm::gen_data(cfg, std::cerr);
    } catch (const accmm::config_error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return accmm::kExitConfig;
    }
  }
  return accmm::kExitOk;
}
