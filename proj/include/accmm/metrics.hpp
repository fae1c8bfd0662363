#pragma once

#include "accmm/constraint.hpp"
#include "accmm/oracle.hpp"
#include "accmm/rng.hpp"

namespace accmm {

struct MetricConfig {
  double inner_max_tolerance = 1e-8;
  long inner_max_budget = 100000;
  double inner_max_step = 0.0;  // 0 -> 1/L_f when known, else probed locally
  double gap_gamma = 0.1;
  double gap_lambda = 0.1;
};

// Projected stationarity measure for mini problems at state (x, v):
//   (1/gamma) ||P_X(x - gamma v) - x|| + ||grad_true - v||
// For an unconstrained set this is ||v|| + ||grad_true - v|| >= ||grad_true||.
double metric_g(const ConstraintSet& set, const Vec& x, const Vec& v, const Vec& grad_true,
                double gamma);

struct InnerMaxResult {
  Vec y;
  bool converged = false;
  long steps = 0;
  double residual = 0.0;  // projected-ascent residual at the returned point
};

// y*(x): analytic maximizer projected into the set when the oracle exposes
// one (exact for isotropic y-curvature), otherwise projected gradient ascent
// on the full objective from y0 until the residual drops below tolerance.
InnerMaxResult solve_inner_max(const MinimaxOracle& oracle, const Vec& x,
                               const ConstraintSet& set_y, const MetricConfig& cfg,
                               const Vec* y0 = nullptr);

// Three-term minimax stationarity measure at state (x, y, v):
//   (1/gamma) ||P_X(x - gamma v) - x|| + ||full_grad_x - v|| + lf ||y - y*(x)||
// where y*(x) maximizes over set_y. inner_converged (optional) reports
// whether the y*(x) solve hit tolerance.
double metric_h(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                const ConstraintSet& set_y, const Vec& x, const Vec& y, const Vec& v,
                double gamma, double lf, const MetricConfig& cfg,
                bool* inner_converged = nullptr);

// Computable surrogate for the plotted stationarity of a constrained pair:
//   (1/gg) ||x - P_X(x - gg grad_x)|| + (1/gl) ||y - P_Y(y + gl grad_y)||
// with full-batch gradients; zero exactly at first-order stationary pairs.
double stationary_gap(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                      const ConstraintSet& set_x, const ConstraintSet& set_y, double gap_gamma,
                      double gap_lambda);

// || d/dx max_y f(x, y) || via Danskin at the solved inner maximizer.
double grad_g_norm(const MinimaxOracle& oracle, const Vec& x, const ConstraintSet& set_y,
                   const MetricConfig& cfg, const Vec* y0 = nullptr);

// Max over random probe pairs of ||grad diff|| / ||point diff|| inside the
// feasible region; a reported estimate, never claimed exact.
double estimate_lf(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                   const ConstraintSet& set_y, int probes, RngStream& rng);

}  // namespace accmm
