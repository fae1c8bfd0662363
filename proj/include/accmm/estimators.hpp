#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "accmm/oracle.hpp"
#include "accmm/rng.hpp"
#include "accmm/vec.hpp"

namespace accmm {

// Raw oracle-call accounting. Incremented exactly once per evaluation; no
// caching credit. cancellation_warnings counts two-point differences that
// fell below 1e3 * eps * |f| (the estimate is still returned).
struct QueryCounter {
  std::uint64_t function_queries = 0;
  std::uint64_t gradient_queries = 0;
  std::uint64_t cancellation_warnings = 0;
};

// Smoothing radii. Unset fields are resolved from (d, m, T) at run start:
//   mu  = 1 / (d (m+T)^{2/3})
//   mu1 = 1 / (d1 (m+T)^{2/3})
//   mu2 = 1 / (sqrt(d1+d2) d2 (m+T)^{2/3})
// taken with equality at the theorem upper bounds to keep the two-point
// difference as large as the theory allows.
struct SmoothingParams {
  std::optional<double> mu;
  std::optional<double> mu1;
  std::optional<double> mu2;
};

double default_mu(int d, double m, int T);
double default_mu1(int d1, double m, int T);
double default_mu2(int d1, int d2, double m, int T);

// Uniform draw from the unit sphere S^{d-1} (normalized Gaussian vector;
// zero-norm draws are rejected and redrawn).
Vec sample_unit_sphere(int d, RngStream& rng);

// Uniform draw from the unit ball (sphere draw scaled by t^{1/d}).
Vec sample_unit_ball(int d, RngStream& rng);

// Two-point uniform-smoothing gradient estimate
//   (d / mu) * (f(x + mu u; xi) - f(x; xi)) * u
// with ||u|| = 1. Costs exactly 2 function queries.
Vec unige_grad(const MiniOracle& oracle, const Vec& x, int sample_id, double mu,
               const Vec& u, QueryCounter& counter);

// Batched partial estimates for minimax objectives: the batch mean of
//   (d1 / mu1) * (f(x + mu1 u_i, y; xi_i) - f(x, y; xi_i)) * u_i
// and the y-side analogue. Each summand costs 2 fresh queries; the base value
// f(x, y; xi_i) is never shared between the x- and y-estimators.
Vec unige_partial_x(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                    std::span<const int> batch, double mu1, std::span<const Vec> dirs,
                    QueryCounter& counter);
Vec unige_partial_y(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                    std::span<const int> batch, double mu2, std::span<const Vec> dirs,
                    QueryCounter& counter);

// Monte-Carlo reference for the ball-smoothed value f_mu(x) = E[f(x + mu u_B)].
// Test-only; per-chunk child streams keep the estimate deterministic and
// thread-count independent.
struct McEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

McEstimate smoothed_value_mc_stats(const std::function<double(const Vec&)>& f, const Vec& x,
                                   double mu, long n_samples, const RngStream& rng);

double smoothed_value_mc(const std::function<double(const Vec&)>& f, const Vec& x, double mu,
                         long n_samples, const RngStream& rng);

}  // namespace accmm
