#pragma once

#include <optional>

#include "accmm/errors.hpp"
#include "accmm/vec.hpp"

namespace accmm {

// Stochastic objective f(x; xi) for mini-optimization. value() must be
// deterministic in (x, sample_id); sample ids index a finite population so
// full_value can be exact. Oracles are immutable after construction and safe
// for concurrent reads; query accounting is done by the caller.
class MiniOracle {
 public:
  virtual ~MiniOracle() = default;

  virtual int dim() const = 0;
  virtual int population_size() const = 0;
  virtual double value(const Vec& x, int sample_id) const = 0;

  virtual bool has_true_grad() const { return false; }
  virtual Vec true_grad(const Vec& /*x*/) const {
    throw contract_error("MiniOracle: true_grad not available");
  }

  virtual bool has_full_value() const { return false; }
  virtual double full_value(const Vec& /*x*/) const {
    throw contract_error("MiniOracle: full_value not available");
  }

  // Gradient Lipschitz constant, when known analytically.
  virtual std::optional<double> smoothness() const { return std::nullopt; }
};

// Stochastic objective f(x, y; xi) for minimax-optimization (minimized in x,
// maximized in y).
class MinimaxOracle {
 public:
  virtual ~MinimaxOracle() = default;

  virtual int dim_x() const = 0;
  virtual int dim_y() const = 0;
  virtual int population_size() const = 0;
  virtual double value(const Vec& x, const Vec& y, int sample_id) const = 0;

  // Per-sample stochastic partial gradients (white-box path).
  virtual bool has_grads() const { return false; }
  virtual Vec grad_x(const Vec&, const Vec&, int) const {
    throw contract_error("MinimaxOracle: grad_x not available");
  }
  virtual Vec grad_y(const Vec&, const Vec&, int) const {
    throw contract_error("MinimaxOracle: grad_y not available");
  }

  // Population-exact value and partial gradients (metrics path).
  virtual bool has_full() const { return false; }
  virtual double full_value(const Vec&, const Vec&) const {
    throw contract_error("MinimaxOracle: full_value not available");
  }
  virtual Vec full_grad_x(const Vec&, const Vec&) const {
    throw contract_error("MinimaxOracle: full_grad_x not available");
  }
  virtual Vec full_grad_y(const Vec&, const Vec&) const {
    throw contract_error("MinimaxOracle: full_grad_y not available");
  }

  // Analytic inner maximizer over unconstrained y, when known.
  virtual bool has_y_star() const { return false; }
  virtual Vec y_star(const Vec& /*x*/) const {
    throw contract_error("MinimaxOracle: y_star not available");
  }

  virtual std::optional<double> smoothness_lf() const { return std::nullopt; }
  virtual std::optional<double> strong_concavity_tau() const { return std::nullopt; }
};

}  // namespace accmm
