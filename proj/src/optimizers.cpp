#include "accmm/optimizers.hpp"

#include <string>
#include <utility>

namespace accmm {

namespace {

bool metric_due(int t, int T, int every) {
  if (every <= 0) return false;
  return t == 1 || t % every == 0 || t == T;
}

int draw_pick(int T, std::uint64_t seed) {
  RngStream pick(seed, "output-pick");
  return 1 + pick.next_index(T);
}

std::vector<int> draw_batch(int b, int population, RngStream& rng) {
  std::vector<int> batch(static_cast<std::size_t>(b));
  for (auto& id : batch) id = rng.next_index(population);
  return batch;
}

std::vector<Vec> draw_dirs(int b, int d, RngStream& rng) {
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) dirs.push_back(sample_unit_sphere(d, rng));
  return dirs;
}

[[noreturn]] void rethrow_with_iteration(const evaluation_error& e, int t) {
  throw evaluation_error("iteration " + std::to_string(t) + ": " + e.what());
}

void require_eta_feasible(const HyperParams& hp, bool constrained, const char* algo) {
  if (constrained && eta_schedule(1, hp.k, hp.m) > 1.0) {
    throw contract_error(std::string(algo) +
                         ": eta_1 = k/(m+1)^{1/3} > 1 breaks feasibility of the "
                         "constrained update; pick m >= k^3");
  }
}

Vec batch_mean_grad_x(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                      std::span<const int> batch, QueryCounter& counter) {
  Vec acc = zeros(static_cast<std::size_t>(oracle.dim_x()));
  for (int id : batch) {
    axpy(1.0, oracle.grad_x(x, y, id), acc);
    ++counter.gradient_queries;
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto& v : acc) v *= inv;
  return acc;
}

Vec batch_mean_grad_y(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                      std::span<const int> batch, QueryCounter& counter) {
  Vec acc = zeros(static_cast<std::size_t>(oracle.dim_y()));
  for (int id : batch) {
    axpy(1.0, oracle.grad_y(x, y, id), acc);
    ++counter.gradient_queries;
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto& v : acc) v *= inv;
  return acc;
}

// Step 6 / step 8 of the momentum loop: plain scaled step when the set is the
// whole space, projected convex combination otherwise.
Vec primal_step(const ConstraintSet& set, const Vec& x, const Vec& v, double gamma, double eta) {
  if (set.is_unconstrained()) {
    Vec next = x;
    axpy(-gamma * eta, v, next);
    return next;
  }
  Vec target = x;
  axpy(-gamma, v, target);
  const Vec tilde = set.project(target);
  Vec next = x;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += eta * (tilde[i] - next[i]);
  return next;
}

Vec dual_step(const ConstraintSet& set, const Vec& y, const Vec& w, double lambda, double eta) {
  Vec target = y;
  axpy(lambda, w, target);
  const Vec tilde = set.project(target);
  Vec next = y;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += eta * (tilde[i] - next[i]);
  return next;
}

enum class MinimaxKind { ZeroOrder, SemiZeroOrder, FirstOrder };

const char* kind_name(MinimaxKind kind) {
  switch (kind) {
    case MinimaxKind::ZeroOrder: return "acc_zomda_run";
    case MinimaxKind::SemiZeroOrder: return "acc_semi_zomda_run";
    case MinimaxKind::FirstOrder: return "acc_mda_run";
  }
  return "";
}

// Shared control flow of the three momentum descent-ascent methods; they
// differ only in how the two estimator pairs are produced.
MinimaxRunResult momentum_da_run(MinimaxKind kind, const MinimaxOracle& oracle,
                                 const ConstraintSet& set_x, const ConstraintSet& set_y,
                                 const HyperParams& hp, const Vec& x_init, const Vec& y_init,
                                 std::uint64_t seed, const RunOptions& opts) {
  hp.validate_minimax();
  require_eta_feasible(hp, !set_x.is_unconstrained() || !set_y.is_unconstrained(),
                       kind_name(kind));
  if (kind != MinimaxKind::ZeroOrder && !oracle.has_grads()) {
    throw contract_error(std::string(kind_name(kind)) + ": oracle does not expose gradients");
  }
  const int d1 = oracle.dim_x();
  const int d2 = oracle.dim_y();
  const int pop = oracle.population_size();
  const double mu1 = hp.smoothing.mu1.value_or(default_mu1(d1, hp.m, hp.T));
  const double mu2 = hp.smoothing.mu2.value_or(default_mu2(d1, d2, hp.m, hp.T));

  RngStream rng_batch(seed, "minibatch");
  RngStream rng_dirs_x(seed, "sphere");
  RngStream rng_dirs_y(seed, "sphere.y");

  MinimaxRunResult res;
  res.pick_iter = draw_pick(hp.T, seed);
  res.trace.reserve(static_cast<std::size_t>(hp.T));

  Vec x = set_x.project(x_init);
  Vec y = set_y.project(y_init);

  const bool zo = (kind == MinimaxKind::ZeroOrder);

  auto estimate_x = [&](const Vec& px, const Vec& py, std::span<const int> batch,
                        std::span<const Vec> dirs) {
    if (kind == MinimaxKind::FirstOrder) return batch_mean_grad_x(oracle, px, py, batch, res.counter);
    return unige_partial_x(oracle, px, py, batch, mu1, dirs, res.counter);
  };
  auto estimate_y = [&](const Vec& px, const Vec& py, std::span<const int> batch,
                        std::span<const Vec> dirs) {
    if (zo) return unige_partial_y(oracle, px, py, batch, mu2, dirs, res.counter);
    return batch_mean_grad_y(oracle, px, py, batch, res.counter);
  };

  Vec v, w;
  {
    const std::vector<int> batch = draw_batch(hp.b, pop, rng_batch);
    const std::vector<Vec> dirs_x =
        (kind == MinimaxKind::FirstOrder) ? std::vector<Vec>{} : draw_dirs(hp.b, d1, rng_dirs_x);
    const std::vector<Vec> dirs_y = zo ? draw_dirs(hp.b, d2, rng_dirs_y) : std::vector<Vec>{};
    try {
      v = estimate_x(x, y, batch, dirs_x);
      w = estimate_y(x, y, batch, dirs_y);
    } catch (const evaluation_error& e) {
      rethrow_with_iteration(e, 0);
    }
  }

  for (int t = 1; t <= hp.T; ++t) {
    if (opts.iterate_observer) opts.iterate_observer(t, x, &y);
    if (t == res.pick_iter) {
      res.x_pick = x;
      res.y_pick = y;
    }

    const double eta = eta_schedule(t, hp.k, hp.m);
    TraceRow row;
    row.iter = t;
    row.eta = eta;
    if (oracle.has_full()) row.objective = oracle.full_value(x, y);
    if (opts.minimax_metric && metric_due(t, hp.T, opts.metric_every)) {
      row.metric = opts.minimax_metric({t, x, y, v, w});
    }

    const Vec x_next = primal_step(set_x, x, v, hp.gamma, eta);
    const Vec y_next = dual_step(set_y, y, w, hp.lambda, eta);
    const double alpha = momentum_coeff(hp.c1, eta);
    const double beta = momentum_coeff(hp.c2, eta);
    row.alpha = alpha;
    row.beta = beta;

    const std::vector<int> batch = draw_batch(hp.b, pop, rng_batch);
    const std::vector<Vec> dirs_x =
        (kind == MinimaxKind::FirstOrder) ? std::vector<Vec>{} : draw_dirs(hp.b, d1, rng_dirs_x);
    const std::vector<Vec> dirs_y = zo ? draw_dirs(hp.b, d2, rng_dirs_y) : std::vector<Vec>{};
    try {
      const Vec gx_new = estimate_x(x_next, y_next, batch, dirs_x);
      const Vec gx_old = estimate_x(x, y, batch, dirs_x);
      const Vec gy_new = estimate_y(x_next, y_next, batch, dirs_y);
      const Vec gy_old = estimate_y(x, y, batch, dirs_y);
      v = storm_combine(gx_new, gx_old, v, alpha);
      w = storm_combine(gy_new, gy_old, w, beta);
    } catch (const evaluation_error& e) {
      rethrow_with_iteration(e, t);
    }

    row.fq = res.counter.function_queries;
    row.gq = res.counter.gradient_queries;
    res.trace.push_back(row);

    x = x_next;
    y = y_next;
  }
  if (opts.iterate_observer) opts.iterate_observer(hp.T + 1, x, &y);
  res.x_final = std::move(x);
  res.y_final = std::move(y);
  return res;
}

}  // namespace

MiniRunResult acc_zom_run(const MiniOracle& oracle, const ConstraintSet& set_x,
                          const HyperParams& hp, const Vec& x_init, std::uint64_t seed,
                          const RunOptions& opts) {
  hp.validate_mini();
  require_eta_feasible(hp, !set_x.is_unconstrained(), "acc_zom_run");
  const int d = oracle.dim();
  const double mu = hp.smoothing.mu.value_or(default_mu(d, hp.m, hp.T));

  RngStream rng_batch(seed, "minibatch");
  RngStream rng_dirs(seed, "sphere");

  MiniRunResult res;
  res.pick_iter = draw_pick(hp.T, seed);
  res.trace.reserve(static_cast<std::size_t>(hp.T));

  Vec x = set_x.project(x_init);
  Vec v;
  {
    const int xi = rng_batch.next_index(oracle.population_size());
    const Vec u = sample_unit_sphere(d, rng_dirs);
    try {
      v = unige_grad(oracle, x, xi, mu, u, res.counter);
    } catch (const evaluation_error& e) {
      rethrow_with_iteration(e, 0);
    }
  }

  for (int t = 1; t <= hp.T; ++t) {
    if (opts.iterate_observer) opts.iterate_observer(t, x, nullptr);
    if (t == res.pick_iter) res.x_pick = x;

    const double eta = eta_schedule(t, hp.k, hp.m);
    TraceRow row;
    row.iter = t;
    row.eta = eta;
    if (oracle.has_full_value()) row.objective = oracle.full_value(x);
    if (opts.mini_metric && metric_due(t, hp.T, opts.metric_every)) {
      row.metric = opts.mini_metric({t, x, v});
    }

    const Vec x_next = primal_step(set_x, x, v, hp.gamma, eta);
    const double alpha = momentum_coeff(hp.c, eta);
    row.alpha = alpha;

    const int xi = rng_batch.next_index(oracle.population_size());
    const Vec u = sample_unit_sphere(d, rng_dirs);
    try {
      // Same (u, xi) at both points: 4 function queries per iteration.
      const Vec g_new = unige_grad(oracle, x_next, xi, mu, u, res.counter);
      const Vec g_old = unige_grad(oracle, x, xi, mu, u, res.counter);
      v = storm_combine(g_new, g_old, v, alpha);
    } catch (const evaluation_error& e) {
      rethrow_with_iteration(e, t);
    }

    row.fq = res.counter.function_queries;
    row.gq = res.counter.gradient_queries;
    res.trace.push_back(row);
    x = x_next;
  }
  if (opts.iterate_observer) opts.iterate_observer(hp.T + 1, x, nullptr);
  res.x_final = std::move(x);
  return res;
}

MinimaxRunResult acc_zomda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                               const ConstraintSet& set_y, const HyperParams& hp,
                               const Vec& x_init, const Vec& y_init, std::uint64_t seed,
                               const RunOptions& opts) {
  return momentum_da_run(MinimaxKind::ZeroOrder, oracle, set_x, set_y, hp, x_init, y_init, seed,
                         opts);
}

MinimaxRunResult acc_semi_zomda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                                    const ConstraintSet& set_y, const HyperParams& hp,
                                    const Vec& x_init, const Vec& y_init, std::uint64_t seed,
                                    const RunOptions& opts) {
  return momentum_da_run(MinimaxKind::SemiZeroOrder, oracle, set_x, set_y, hp, x_init, y_init,
                         seed, opts);
}

MinimaxRunResult acc_mda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                             const ConstraintSet& set_y, const HyperParams& hp, const Vec& x_init,
                             const Vec& y_init, std::uint64_t seed, const RunOptions& opts) {
  return momentum_da_run(MinimaxKind::FirstOrder, oracle, set_x, set_y, hp, x_init, y_init, seed,
                         opts);
}

MiniRunResult zo_sgd_run(const MiniOracle& oracle, const ConstraintSet& set_x,
                         const HyperParams& hp, const Vec& x_init, std::uint64_t seed,
                         const RunOptions& opts) {
  hp.validate_mini();
  const int d = oracle.dim();
  const double mu = hp.smoothing.mu.value_or(default_mu(d, hp.m, hp.T));

  RngStream rng_batch(seed, "minibatch");
  RngStream rng_dirs(seed, "sphere");

  MiniRunResult res;
  res.pick_iter = draw_pick(hp.T, seed);
  Vec x = set_x.project(x_init);

  for (int t = 1; t <= hp.T; ++t) {
    if (opts.iterate_observer) opts.iterate_observer(t, x, nullptr);
    if (t == res.pick_iter) res.x_pick = x;

    TraceRow row;
    row.iter = t;
    row.eta = 1.0;
    row.alpha = 1.0;
    if (oracle.has_full_value()) row.objective = oracle.full_value(x);

    Vec g = zeros(static_cast<std::size_t>(d));
    try {
      for (int i = 0; i < hp.b; ++i) {
        const int xi = rng_batch.next_index(oracle.population_size());
        const Vec u = sample_unit_sphere(d, rng_dirs);
        axpy(1.0, unige_grad(oracle, x, xi, mu, u, res.counter), g);
      }
    } catch (const evaluation_error& e) {
      rethrow_with_iteration(e, t);
    }
    const double inv = 1.0 / static_cast<double>(hp.b);
    for (auto& e : g) e *= inv;

    if (opts.mini_metric && metric_due(t, hp.T, opts.metric_every)) {
      row.metric = opts.mini_metric({t, x, g});
    }

    Vec target = x;
    axpy(-hp.gamma, g, target);
    x = set_x.project(target);

    row.fq = res.counter.function_queries;
    row.gq = res.counter.gradient_queries;
    res.trace.push_back(row);
  }
  if (opts.iterate_observer) opts.iterate_observer(hp.T + 1, x, nullptr);
  res.x_final = std::move(x);
  return res;
}

namespace {

// Plain descent ascent (fixed steps) over either zeroth-order batch estimates
// or stochastic gradients.
MinimaxRunResult plain_da_run(bool zeroth_order, const MinimaxOracle& oracle,
                              const ConstraintSet& set_x, const ConstraintSet& set_y,
                              const HyperParams& hp, const Vec& x_init, const Vec& y_init,
                              std::uint64_t seed, const RunOptions& opts) {
  hp.validate_minimax();
  if (!zeroth_order && !oracle.has_grads()) {
    throw contract_error("sgda_run: oracle does not expose gradients");
  }
  const int d1 = oracle.dim_x();
  const int d2 = oracle.dim_y();
  const int pop = oracle.population_size();
  const double mu1 = hp.smoothing.mu1.value_or(default_mu1(d1, hp.m, hp.T));
  const double mu2 = hp.smoothing.mu2.value_or(default_mu2(d1, d2, hp.m, hp.T));

  RngStream rng_batch(seed, "minibatch");
  RngStream rng_dirs_x(seed, "sphere");
  RngStream rng_dirs_y(seed, "sphere.y");

  MinimaxRunResult res;
  res.pick_iter = draw_pick(hp.T, seed);
  Vec x = set_x.project(x_init);
  Vec y = set_y.project(y_init);

  for (int t = 1; t <= hp.T; ++t) {
    if (opts.iterate_observer) opts.iterate_observer(t, x, &y);
    if (t == res.pick_iter) {
      res.x_pick = x;
      res.y_pick = y;
    }

    TraceRow row;
    row.iter = t;
    row.eta = 1.0;
    row.alpha = 1.0;
    row.beta = 1.0;
    if (oracle.has_full()) row.objective = oracle.full_value(x, y);

    Vec v, w;
    try {
      const std::vector<int> batch = draw_batch(hp.b, pop, rng_batch);
      if (zeroth_order) {
        const std::vector<Vec> dirs_x = draw_dirs(hp.b, d1, rng_dirs_x);
        const std::vector<Vec> dirs_y = draw_dirs(hp.b, d2, rng_dirs_y);
        v = unige_partial_x(oracle, x, y, batch, mu1, dirs_x, res.counter);
        w = unige_partial_y(oracle, x, y, batch, mu2, dirs_y, res.counter);
      } else {
        v = batch_mean_grad_x(oracle, x, y, batch, res.counter);
        w = batch_mean_grad_y(oracle, x, y, batch, res.counter);
      }
    } catch (const evaluation_error& e) {
      rethrow_with_iteration(e, t);
    }

    if (opts.minimax_metric && metric_due(t, hp.T, opts.metric_every)) {
      row.metric = opts.minimax_metric({t, x, y, v, w});
    }

    Vec tx = x;
    axpy(-hp.gamma, v, tx);
    x = set_x.project(tx);
    Vec ty = y;
    axpy(hp.lambda, w, ty);
    y = set_y.project(ty);

    row.fq = res.counter.function_queries;
    row.gq = res.counter.gradient_queries;
    res.trace.push_back(row);
  }
  if (opts.iterate_observer) opts.iterate_observer(hp.T + 1, x, &y);
  res.x_final = std::move(x);
  res.y_final = std::move(y);
  return res;
}

}  // namespace

MinimaxRunResult zo_sgda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                             const ConstraintSet& set_y, const HyperParams& hp, const Vec& x_init,
                             const Vec& y_init, std::uint64_t seed, const RunOptions& opts) {
  return plain_da_run(true, oracle, set_x, set_y, hp, x_init, y_init, seed, opts);
}

MinimaxRunResult sgda_run(const MinimaxOracle& oracle, const ConstraintSet& set_x,
                          const ConstraintSet& set_y, const HyperParams& hp, const Vec& x_init,
                          const Vec& y_init, std::uint64_t seed, const RunOptions& opts) {
  return plain_da_run(false, oracle, set_x, set_y, hp, x_init, y_init, seed, opts);
}

}  // namespace accmm
