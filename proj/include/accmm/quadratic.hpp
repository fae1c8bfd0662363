#pragma once

#include <cstdint>

#include "accmm/oracle.hpp"

namespace accmm {

// f(x; xi) = 1/2 x'Ax + b'x + noise(xi), A symmetric positive definite with
// known spectrum (A = Q diag(lambda) Q', lambda in [0.5, 1] * scale), so the
// gradient Lipschitz constant is exact. noise alternates +/- sigma by
// sample-id parity: zero mean over the (even-sized) population, bounded
// variance, and an exact full_value.
class QuadraticMini final : public MiniOracle {
 public:
  QuadraticMini(int dim, std::uint64_t seed, double sigma = 0.1, double scale = 1.0);

  int dim() const override { return dim_; }
  int population_size() const override { return kPopulation; }
  double value(const Vec& x, int sample_id) const override;

  bool has_true_grad() const override { return true; }
  Vec true_grad(const Vec& x) const override;

  bool has_full_value() const override { return true; }
  double full_value(const Vec& x) const override;

  std::optional<double> smoothness() const override { return lipschitz_; }

  const Vec& minimizer() const { return x_star_; }
  double sigma() const { return sigma_; }
  double trace_a() const { return trace_a_; }

  static constexpr int kPopulation = 1000;

 private:
  int dim_;
  double sigma_;
  double lipschitz_;
  double trace_a_;
  std::vector<double> a_;  // dim x dim, row-major
  Vec b_;
  Vec x_star_;
};

// f(x, y; xi) = 1/2 x'Px + x'Qy - tau/2 ||y||^2 + noise(xi) with diagonal P
// and (rectangular-)diagonal Q, so every derived quantity is closed form:
//   y*(x)_i = q_i x_i / tau            (unconstrained y)
//   g(x)    = 1/2 sum (p_i + q_i^2/tau) x_i^2
//   L_f     = max over 2x2 coordinate blocks [[p, q], [q, -tau]] of |lambda|
// The y-curvature is isotropic (-tau I), so the maximizer over an L2 ball is
// the radial projection of y*(x).
class QuadraticSaddle final : public MinimaxOracle {
 public:
  QuadraticSaddle(int dim_x, int dim_y, std::uint64_t seed, double tau = 1.0,
                  double sigma = 0.1, double scale = 1.0);

  int dim_x() const override { return dx_; }
  int dim_y() const override { return dy_; }
  int population_size() const override { return kPopulation; }
  double value(const Vec& x, const Vec& y, int sample_id) const override;

  bool has_grads() const override { return true; }
  Vec grad_x(const Vec& x, const Vec& y, int sample_id) const override;
  Vec grad_y(const Vec& x, const Vec& y, int sample_id) const override;

  bool has_full() const override { return true; }
  double full_value(const Vec& x, const Vec& y) const override;
  Vec full_grad_x(const Vec& x, const Vec& y) const override;
  Vec full_grad_y(const Vec& x, const Vec& y) const override;

  bool has_y_star() const override { return true; }
  Vec y_star(const Vec& x) const override;

  std::optional<double> smoothness_lf() const override { return lf_; }
  std::optional<double> strong_concavity_tau() const override { return tau_; }

  // Unconstrained-y envelope g(x) = max_y f(x, y) and its gradient.
  double g_value(const Vec& x) const;
  Vec g_grad(const Vec& x) const;

  double tau() const { return tau_; }
  const Vec& p() const { return p_; }
  const Vec& q() const { return q_; }

  static constexpr int kPopulation = 1000;

 private:
  int dx_;
  int dy_;
  double tau_;
  double sigma_;
  double lf_;
  Vec p_;  // dim_x diagonal
  Vec q_;  // min(dim_x, dim_y) coupling diagonal
};

QuadraticMini quadratic_mini(int dim, std::uint64_t seed, double sigma = 0.1,
                             double scale = 1.0);
QuadraticSaddle quadratic_saddle(int dim_x, int dim_y, std::uint64_t seed, double tau = 1.0,
                                 double sigma = 0.1, double scale = 1.0);

}  // namespace accmm
