#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "accmm/hyperparams.hpp"

namespace accmm {

// Flat key-value run configuration with dotted sections ("problem.n = 1000").
// Parsing is strict: unknown keys are rejected. Unset keys take defaults; the
// poisoning problem defaults to its published hyperparameters (epsilon = 2,
// lambda_reg = 0.001, corruption 0.15, gamma = 0.2, lambda = 0.08, k = 1,
// m = 3, c1 = c2 = 3, b = 10).
struct RunConfig {
  // problem
  std::string problem;  // quadratic_mini | quadratic_saddle | poisoning
  int n = 1000;
  int d = 100;
  double epsilon = 2.0;
  double lambda_reg = 0.001;
  double corruption_rate = 0.15;
  std::string data_csv;  // optional dataset import (poisoning)
  int dim = 2;           // quadratic_mini
  int dim_x = 5;         // quadratic_saddle
  int dim_y = 5;
  double tau = 1.0;
  double sigma = 0.1;
  double curvature = 1.0;
  std::uint64_t problem_seed = 2024;

  // constraint sets; "auto" follows the problem's own geometry
  std::string set_x = "auto";  // auto | none | linf | l2
  std::string set_y = "auto";
  double set_x_radius = 0.0;
  double set_y_radius = 0.0;

  // algorithm + hyperparameters
  std::string algorithm;
  HyperParams hp;
  bool hp_set_gamma = false;
  bool hp_set_lambda = false;
  bool hp_set_b = false;

  // run control
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int metric_every = 10;
  std::string metric = "auto";  // auto | g | h | gap | grad_g | none
  std::string output_dir = "out";
  double init_x_scale = 1.0;
  std::string init_y = "auto";  // auto | ystar | zero
  double gap_gamma = 0.0;       // 0 -> hp.gamma
  double gap_lambda = 0.0;      // 0 -> hp.lambda

  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Resolved-config echo: every key with its effective value, sorted, in the
// input grammar. Byte-stable for provenance.
std::string render_config(const RunConfig& cfg);

}  // namespace accmm
