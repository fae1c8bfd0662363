#include "accmm/quadratic.hpp"

#include <algorithm>
#include <cmath>

#include "accmm/rng.hpp"

namespace accmm {

namespace {

double parity_noise(int sample_id, double sigma) {
  return (sample_id % 2 == 0) ? sigma : -sigma;
}

// Random orthonormal columns via Gram-Schmidt on Gaussian draws.
std::vector<double> random_rotation(int d, RngStream& rng) {
  std::vector<double> q(static_cast<std::size_t>(d) * d);
  for (int col = 0; col < d; ++col) {
    Vec v(static_cast<std::size_t>(d));
    double nrm = 0.0;
    do {
      for (auto& e : v) e = rng.next_normal();
      for (int prev = 0; prev < col; ++prev) {
        double proj = 0.0;
        for (int i = 0; i < d; ++i) proj += q[static_cast<std::size_t>(i) * d + prev] * v[i];
        for (int i = 0; i < d; ++i) v[i] -= proj * q[static_cast<std::size_t>(i) * d + prev];
      }
      nrm = norm2(v);
    } while (nrm < 1e-8);
    for (int i = 0; i < d; ++i) q[static_cast<std::size_t>(i) * d + col] = v[i] / nrm;
  }
  return q;
}

}  // namespace

QuadraticMini::QuadraticMini(int dim, std::uint64_t seed, double sigma, double scale)
    : dim_(dim), sigma_(sigma) {
  if (dim < 1) throw contract_error("QuadraticMini: dim must be >= 1");
  if (!(scale > 0.0)) throw contract_error("QuadraticMini: scale must be positive");
  RngStream rng(seed, "quadratic-mini");

  Vec lambda(static_cast<std::size_t>(dim));
  double lmax = 0.0;
  trace_a_ = 0.0;
  for (auto& l : lambda) {
    l = scale * (0.5 + 0.5 * rng.next_u01());
    lmax = std::max(lmax, l);
    trace_a_ += l;
  }
  lipschitz_ = lmax;

  const auto n = static_cast<std::size_t>(dim);
  const std::vector<double> q = random_rotation(dim, rng);
  a_.assign(n * n, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        s += q[static_cast<std::size_t>(i) * n + k] * lambda[static_cast<std::size_t>(k)] *
             q[static_cast<std::size_t>(j) * n + k];
      }
      a_[static_cast<std::size_t>(i) * n + j] = s;
    }
  }

  b_.resize(n);
  for (auto& e : b_) e = 2.0 * rng.next_u01() - 1.0;

  // x* = -A^{-1} b = -Q diag(1/lambda) Q' b
  Vec qtb(n, 0.0);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += q[static_cast<std::size_t>(i) * n + k] * b_[i];
    qtb[static_cast<std::size_t>(k)] = s / lambda[static_cast<std::size_t>(k)];
  }
  x_star_.assign(n, 0.0);
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += q[static_cast<std::size_t>(i) * n + k] * qtb[static_cast<std::size_t>(k)];
    x_star_[static_cast<std::size_t>(i)] = -s;
  }
}

double QuadraticMini::full_value(const Vec& x) const {
  require_dim(x, static_cast<std::size_t>(dim_), "QuadraticMini::full_value");
  const auto n = static_cast<std::size_t>(dim_);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a_[i * n + j] * x[j];
    s += 0.5 * x[i] * row + b_[i] * x[i];
  }
  return s;
}

double QuadraticMini::value(const Vec& x, int sample_id) const {
  return full_value(x) + parity_noise(sample_id, sigma_);
}

Vec QuadraticMini::true_grad(const Vec& x) const {
  require_dim(x, static_cast<std::size_t>(dim_), "QuadraticMini::true_grad");
  const auto n = static_cast<std::size_t>(dim_);
  Vec g(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a_[i * n + j] * x[j];
    g[i] = row + b_[i];
  }
  return g;
}

QuadraticMini quadratic_mini(int dim, std::uint64_t seed, double sigma, double scale) {
  return QuadraticMini(dim, seed, sigma, scale);
}

QuadraticSaddle::QuadraticSaddle(int dim_x, int dim_y, std::uint64_t seed, double tau,
                                 double sigma, double scale)
    : dx_(dim_x), dy_(dim_y), tau_(tau), sigma_(sigma) {
  if (dim_x < 1 || dim_y < 1) throw contract_error("QuadraticSaddle: dims must be >= 1");
  if (!(tau > 0.0)) throw contract_error("QuadraticSaddle: tau must be positive");
  RngStream rng(seed, "quadratic-saddle");

  p_.resize(static_cast<std::size_t>(dim_x));
  for (auto& v : p_) v = scale * (0.5 + 0.5 * rng.next_u01());
  const int paired = std::min(dim_x, dim_y);
  q_.resize(static_cast<std::size_t>(paired));
  for (auto& v : q_) v = scale * (0.3 + 0.4 * rng.next_u01());

  // Hessian block [[p, q], [q, -tau]] per paired coordinate; unpaired
  // coordinates contribute |p_i| (x only) or tau (y only).
  double lf = tau;
  for (int i = 0; i < dim_x; ++i) {
    const double p = p_[static_cast<std::size_t>(i)];
    if (i < paired) {
      const double q = q_[static_cast<std::size_t>(i)];
      const double disc = std::sqrt((p + tau) * (p + tau) + 4.0 * q * q);
      const double hi = 0.5 * ((p - tau) + disc);
      const double lo = 0.5 * ((p - tau) - disc);
      lf = std::max({lf, std::fabs(hi), std::fabs(lo)});
    } else {
      lf = std::max(lf, std::fabs(p));
    }
  }
  lf_ = lf;
}

double QuadraticSaddle::full_value(const Vec& x, const Vec& y) const {
  require_dim(x, static_cast<std::size_t>(dx_), "QuadraticSaddle::full_value x");
  require_dim(y, static_cast<std::size_t>(dy_), "QuadraticSaddle::full_value y");
  double s = 0.0;
  for (int i = 0; i < dx_; ++i) s += 0.5 * p_[static_cast<std::size_t>(i)] * x[i] * x[i];
  const int paired = static_cast<int>(q_.size());
  for (int i = 0; i < paired; ++i) s += q_[static_cast<std::size_t>(i)] * x[i] * y[i];
  for (int j = 0; j < dy_; ++j) s -= 0.5 * tau_ * y[j] * y[j];
  return s;
}

double QuadraticSaddle::value(const Vec& x, const Vec& y, int sample_id) const {
  return full_value(x, y) + parity_noise(sample_id, sigma_);
}

Vec QuadraticSaddle::full_grad_x(const Vec& x, const Vec& y) const {
  require_dim(x, static_cast<std::size_t>(dx_), "QuadraticSaddle::full_grad_x x");
  require_dim(y, static_cast<std::size_t>(dy_), "QuadraticSaddle::full_grad_x y");
  Vec g(static_cast<std::size_t>(dx_), 0.0);
  const int paired = static_cast<int>(q_.size());
  for (int i = 0; i < dx_; ++i) {
    g[static_cast<std::size_t>(i)] = p_[static_cast<std::size_t>(i)] * x[i];
    if (i < paired) g[static_cast<std::size_t>(i)] += q_[static_cast<std::size_t>(i)] * y[i];
  }
  return g;
}

Vec QuadraticSaddle::full_grad_y(const Vec& x, const Vec& y) const {
  require_dim(x, static_cast<std::size_t>(dx_), "QuadraticSaddle::full_grad_y x");
  require_dim(y, static_cast<std::size_t>(dy_), "QuadraticSaddle::full_grad_y y");
  Vec g(static_cast<std::size_t>(dy_), 0.0);
  const int paired = static_cast<int>(q_.size());
  for (int j = 0; j < dy_; ++j) {
    g[static_cast<std::size_t>(j)] = -tau_ * y[j];
    if (j < paired) g[static_cast<std::size_t>(j)] += q_[static_cast<std::size_t>(j)] * x[j];
  }
  return g;
}

Vec QuadraticSaddle::grad_x(const Vec& x, const Vec& y, int /*sample_id*/) const {
  return full_grad_x(x, y);
}

Vec QuadraticSaddle::grad_y(const Vec& x, const Vec& y, int /*sample_id*/) const {
  return full_grad_y(x, y);
}

Vec QuadraticSaddle::y_star(const Vec& x) const {
  require_dim(x, static_cast<std::size_t>(dx_), "QuadraticSaddle::y_star");
  Vec y(static_cast<std::size_t>(dy_), 0.0);
  const int paired = static_cast<int>(q_.size());
  for (int j = 0; j < paired; ++j) {
    y[static_cast<std::size_t>(j)] = q_[static_cast<std::size_t>(j)] * x[j] / tau_;
  }
  return y;
}

double QuadraticSaddle::g_value(const Vec& x) const {
  require_dim(x, static_cast<std::size_t>(dx_), "QuadraticSaddle::g_value");
  double s = 0.0;
  const int paired = static_cast<int>(q_.size());
  for (int i = 0; i < dx_; ++i) {
    double coeff = p_[static_cast<std::size_t>(i)];
    if (i < paired) {
      const double q = q_[static_cast<std::size_t>(i)];
      coeff += q * q / tau_;
    }
    s += 0.5 * coeff * x[i] * x[i];
  }
  return s;
}

Vec QuadraticSaddle::g_grad(const Vec& x) const {
  require_dim(x, static_cast<std::size_t>(dx_), "QuadraticSaddle::g_grad");
  Vec g(static_cast<std::size_t>(dx_), 0.0);
  const int paired = static_cast<int>(q_.size());
  for (int i = 0; i < dx_; ++i) {
    double coeff = p_[static_cast<std::size_t>(i)];
    if (i < paired) {
      const double q = q_[static_cast<std::size_t>(i)];
      coeff += q * q / tau_;
    }
    g[static_cast<std::size_t>(i)] = coeff * x[i];
  }
  return g;
}

QuadraticSaddle quadratic_saddle(int dim_x, int dim_y, std::uint64_t seed, double tau,
                                 double sigma, double scale) {
  return QuadraticSaddle(dim_x, dim_y, seed, tau, sigma, scale);
}

}  // namespace accmm
