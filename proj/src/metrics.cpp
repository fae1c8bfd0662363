#include "accmm/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace accmm {

double metric_g(const ConstraintSet& set, const Vec& x, const Vec& v, const Vec& grad_true,
                double gamma) {
  if (!(gamma > 0.0)) throw contract_error("metric_g: gamma must be positive");
  require_dim(v, x.size(), "metric_g v");
  require_dim(grad_true, x.size(), "metric_g grad");
  Vec target = x;
  axpy(-gamma, v, target);
  const Vec tilde = set.project(target);
  return dist2(tilde, x) / gamma + dist2(grad_true, v);
}

InnerMaxResult solve_inner_max(const MinimaxOracle& oracle, const Vec& x,
                               const ConstraintSet& set_y, const MetricConfig& cfg,
                               const Vec* y0) {
  if (!(cfg.inner_max_tolerance > 0.0)) {
    throw contract_error("solve_inner_max: tolerance must be positive");
  }
  if (cfg.inner_max_budget < 1) throw contract_error("solve_inner_max: budget must be >= 1");

  auto residual_at = [&](const Vec& y, double step) {
    Vec target = y;
    axpy(step, oracle.full_grad_y(x, y), target);
    return dist2(set_y.project(target), y) / step;
  };

  InnerMaxResult res;
  if (oracle.has_y_star()) {
    res.y = set_y.project(oracle.y_star(x));
    res.converged = true;
    if (oracle.has_full()) res.residual = residual_at(res.y, 1.0);
    return res;
  }
  if (!oracle.has_full()) {
    throw contract_error("solve_inner_max: oracle has neither y_star nor full gradients");
  }

  double step = cfg.inner_max_step;
  if (step <= 0.0) {
    if (auto lf = oracle.smoothness_lf(); lf.has_value() && *lf > 0.0) {
      step = 1.0 / *lf;
    } else {
      // Local curvature probe along a fixed direction.
      Vec y = y0 ? set_y.project(*y0) : set_y.project(zeros(static_cast<std::size_t>(oracle.dim_y())));
      Vec y2 = y;
      const double h = 1e-4 * std::max(1.0, norm2(y));
      for (auto& e : y2) e += h / std::sqrt(static_cast<double>(y2.size()));
      const double gd = dist2(oracle.full_grad_y(x, y2), oracle.full_grad_y(x, y));
      const double lf_hat = gd / h;
      step = lf_hat > 0.0 ? 1.0 / lf_hat : 1.0;
    }
  }

  Vec y = y0 ? set_y.project(*y0) : set_y.project(zeros(static_cast<std::size_t>(oracle.dim_y())));
  for (long it = 0; it < cfg.inner_max_budget; ++it) {
    Vec target = y;
    axpy(step, oracle.full_grad_y(x, y), target);
    Vec next = set_y.project(target);
    const double res_norm = dist2(next, y) / step;
    y = std::move(next);
    ++res.steps;
    if (res_norm <= cfg.inner_max_tolerance) {
      res.converged = true;
      break;
    }
  }
  res.residual = residual_at(y, step);
  res.converged = res.converged || res.residual <= cfg.inner_max_tolerance;
  res.y = std::move(y);
  return res;
}

double metric_h(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                const ConstraintSet& set_y, const Vec& x, const Vec& y, const Vec& v,
                double gamma, double lf, const MetricConfig& cfg, bool* inner_converged) {
  if (!(gamma > 0.0)) throw contract_error("metric_h: gamma must be positive");
  if (!(lf > 0.0)) throw contract_error("metric_h: lf must be positive");
  Vec target = x;
  axpy(-gamma, v, target);
  const Vec tilde = set_x.project(target);

  const Vec gx = oracle.full_grad_x(x, y);
  InnerMaxResult inner = solve_inner_max(oracle, x, set_y, cfg, &y);
  if (inner_converged != nullptr) *inner_converged = inner.converged;
  return dist2(tilde, x) / gamma + dist2(gx, v) + lf * dist2(y, inner.y);
}

double stationary_gap(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                      const ConstraintSet& set_x, const ConstraintSet& set_y, double gap_gamma,
                      double gap_lambda) {
  if (!(gap_gamma > 0.0) || !(gap_lambda > 0.0)) {
    throw contract_error("stationary_gap: step scales must be positive");
  }
  Vec tx = x;
  axpy(-gap_gamma, oracle.full_grad_x(x, y), tx);
  Vec ty = y;
  axpy(gap_lambda, oracle.full_grad_y(x, y), ty);
  return dist2(x, set_x.project(tx)) / gap_gamma + dist2(y, set_y.project(ty)) / gap_lambda;
}

double grad_g_norm(const MinimaxOracle& oracle, const Vec& x, const ConstraintSet& set_y,
                   const MetricConfig& cfg, const Vec* y0) {
  const InnerMaxResult inner = solve_inner_max(oracle, x, set_y, cfg, y0);
  return norm2(oracle.full_grad_x(x, inner.y));
}

double estimate_lf(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                   const ConstraintSet& set_y, int probes, RngStream& rng) {
  if (probes < 1) throw contract_error("estimate_lf: probes must be >= 1");
  const auto d1 = static_cast<std::size_t>(oracle.dim_x());
  const auto d2 = static_cast<std::size_t>(oracle.dim_y());

  auto random_point = [&](const ConstraintSet& set, std::size_t d) {
    Vec p(d);
    for (auto& e : p) e = rng.next_normal();
    return set.project(p);
  };

  double best = 0.0;
  for (int k = 0; k < probes; ++k) {
    const Vec x1 = random_point(set_x, d1);
    const Vec y1 = random_point(set_y, d2);
    const Vec x2 = random_point(set_x, d1);
    const Vec y2 = random_point(set_y, d2);
    const double dz = std::sqrt(dist2(x1, x2) * dist2(x1, x2) + dist2(y1, y2) * dist2(y1, y2));
    if (dz < 1e-12) continue;

    const Vec gx1 = oracle.full_grad_x(x1, y1);
    const Vec gy1 = oracle.full_grad_y(x1, y1);
    const Vec gx2 = oracle.full_grad_x(x2, y2);
    const Vec gy2 = oracle.full_grad_y(x2, y2);
    const double dg =
        std::sqrt(dist2(gx1, gx2) * dist2(gx1, gx2) + dist2(gy1, gy2) * dist2(gy1, gy2));
    best = std::max(best, dg / dz);
  }
  return best;
}

}  // namespace accmm
