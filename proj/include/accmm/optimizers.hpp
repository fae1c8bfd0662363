#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "accmm/constraint.hpp"
#include "accmm/hyperparams.hpp"
#include "accmm/oracle.hpp"
#include "accmm/trace.hpp"

namespace accmm {

// Metric callbacks receive the pre-update state of iteration t. They run on
// the analytic/full-batch path and must not touch the run's streams or
// counters.
struct MiniMetricCtx {
  int t;
  const Vec& x;
  const Vec& v;
};

struct MinimaxMetricCtx {
  int t;
  const Vec& x;
  const Vec& y;
  const Vec& v;
  const Vec& w;
};

struct RunOptions {
  int metric_every = 10;
  std::function<double(const MiniMetricCtx&)> mini_metric;
  std::function<double(const MinimaxMetricCtx&)> minimax_metric;
  // Called with every iterate (t = 1 .. T+1); y is null for mini runs.
  std::function<void(int, const Vec&, const Vec*)> iterate_observer;
};

struct MiniRunResult {
  Vec x_final;
  Vec x_pick;   // x_zeta, zeta uniform on {1..T} from the output-pick stream
  int pick_iter = 0;
  QueryCounter counter;
  std::vector<TraceRow> trace;
};

struct MinimaxRunResult {
  Vec x_final;
  Vec y_final;
  Vec x_pick;
  Vec y_pick;
  int pick_iter = 0;
  QueryCounter counter;
  std::vector<TraceRow> trace;
};

// Zeroth-order momentum method for mini-optimization. Black-box: consumes
// exactly 2 function queries at init and 4 per iteration.
MiniRunResult acc_zom_run(const MiniOracle& oracle, const ConstraintSet& set_x,
                          const HyperParams& hp, const Vec& x_init, std::uint64_t seed,
                          const RunOptions& opts = {});

// Zeroth-order momentum descent ascent. 4b function queries at init, 8b per
// iteration (no base-value sharing between the x- and y-estimators).
MinimaxRunResult acc_zomda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                               const ConstraintSet& set_y, const HyperParams& hp,
                               const Vec& x_init, const Vec& y_init, std::uint64_t seed,
                               const RunOptions& opts = {});

// One-side black-box variant: the y-estimator is replaced by the stochastic
// partial gradient, the x side stays zeroth-order.
MinimaxRunResult acc_semi_zomda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                                    const ConstraintSet& set_y, const HyperParams& hp,
                                    const Vec& x_init, const Vec& y_init, std::uint64_t seed,
                                    const RunOptions& opts = {});

// White-box momentum descent ascent on stochastic gradients. The counter
// records partial-gradient calls: 2b at init, 4b per iteration.
MinimaxRunResult acc_mda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                             const ConstraintSet& set_y, const HyperParams& hp,
                             const Vec& x_init, const Vec& y_init, std::uint64_t seed,
                             const RunOptions& opts = {});

// Plain baselines: fixed steps (hp.gamma / hp.lambda), no schedule, no
// momentum. They anchor directional comparisons only.
MiniRunResult zo_sgd_run(const MiniOracle& oracle, const ConstraintSet& set_x,
                         const HyperParams& hp, const Vec& x_init, std::uint64_t seed,
                         const RunOptions& opts = {});

MinimaxRunResult zo_sgda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                             const ConstraintSet& set_y, const HyperParams& hp,
                             const Vec& x_init, const Vec& y_init, std::uint64_t seed,
                             const RunOptions& opts = {});

MinimaxRunResult sgda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                          const ConstraintSet& set_y, const HyperParams& hp, const Vec& x_init,
                          const Vec& y_init, std::uint64_t seed, const RunOptions& opts = {});

}  // namespace accmm
