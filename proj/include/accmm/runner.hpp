#pragma once

#include <iosfwd>
#include <string>

#include "accmm/config.hpp"
#include "accmm/theory.hpp"

namespace accmm {

// Exit codes shared by the runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEvaluation = 3;

// Runs every (algorithm, seed) pair of a config and writes, under the
// resolved output directory:
//   <algorithm>_seed<k>.csv   one trace per seed
//   summary.csv               per-seed final metric, best metric, queries
//   theory_check.txt          side-condition report
//   resolved_config.txt       config echo with all defaults filled
// Relative output directories are placed under $ACCMM_OUT_ROOT when set.
int run_experiment(const RunConfig& cfg, std::ostream& diag);
int run_experiment(const std::string& config_path, std::ostream& diag);

// Mean/stderr of the metric across the seed traces of a directory, step
// interpolated onto the union grid of function-query checkpoints. Writes
// <dir>/aggregate.csv with columns fq,metric_mean,metric_stderr,n_seeds.
int aggregate_seeds(const std::string& trace_dir, std::ostream& diag);

// Theory report for a config (constants resolved from the problem).
TheoryReport check_config(const RunConfig& cfg);

// Writes the generated dataset as CSV to <output_dir>/dataset.csv.
int gen_data(const RunConfig& cfg, std::ostream& diag);

std::string resolve_output_dir(const std::string& output_dir);

}  // namespace accmm
