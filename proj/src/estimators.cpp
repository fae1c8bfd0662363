#include "accmm/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "accmm/parallel.hpp"

namespace accmm {

namespace {

double require_eval(double v, const char* what, int sample_id) {
  if (!std::isfinite(v)) {
    throw evaluation_error(std::string(what) + ": non-finite oracle value (sample_id=" +
                           std::to_string(sample_id) + ")");
  }
  return v;
}

void note_cancellation(double diff, double base, QueryCounter& counter) {
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::fabs(base);
  if (std::fabs(diff) < floor) ++counter.cancellation_warnings;
}

}  // namespace

double default_mu(int d, double m, int T) {
  return 1.0 / (d * std::pow(m + T, 2.0 / 3.0));
}

double default_mu1(int d1, double m, int T) { return default_mu(d1, m, T); }

double default_mu2(int d1, int d2, double m, int T) {
  return 1.0 / (std::sqrt(static_cast<double>(d1) + d2) * d2 * std::pow(m + T, 2.0 / 3.0));
}

Vec sample_unit_sphere(int d, RngStream& rng) {
  if (d < 1) throw contract_error("sample_unit_sphere: d must be >= 1");
  Vec u(static_cast<std::size_t>(d));
  double n = 0.0;
  do {
    double n2 = 0.0;
    for (auto& v : u) {
      v = rng.next_normal();
      n2 += v * v;
    }
    n = std::sqrt(n2);
  } while (n == 0.0);
  for (auto& v : u) v /= n;
  return u;
}

Vec sample_unit_ball(int d, RngStream& rng) {
  Vec u = sample_unit_sphere(d, rng);
  const double r = std::pow(rng.next_u01(), 1.0 / d);
  for (auto& v : u) v *= r;
  return u;
}

Vec unige_grad(const MiniOracle& oracle, const Vec& x, int sample_id, double mu, const Vec& u,
               QueryCounter& counter) {
  require_dim(x, static_cast<std::size_t>(oracle.dim()), "unige_grad x");
  require_dim(u, static_cast<std::size_t>(oracle.dim()), "unige_grad u");
  if (!(mu > 0.0)) throw contract_error("unige_grad: mu must be positive");

  Vec xp = x;
  axpy(mu, u, xp);
  const double f_plus = require_eval(oracle.value(xp, sample_id), "unige_grad", sample_id);
  const double f_base = require_eval(oracle.value(x, sample_id), "unige_grad", sample_id);
  counter.function_queries += 2;

  const double diff = f_plus - f_base;
  note_cancellation(diff, f_base, counter);
  const double scale = diff * (static_cast<double>(oracle.dim()) / mu);
  return scaled(u, scale);
}

namespace {

// Shared batch loop for the two partial estimators. Shift selects which block
// of the joint point is perturbed.
template <bool ShiftX>
Vec unige_partial_impl(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                       std::span<const int> batch, double mu, std::span<const Vec> dirs,
                       QueryCounter& counter, const char* what) {
  require_dim(x, static_cast<std::size_t>(oracle.dim_x()), what);
  require_dim(y, static_cast<std::size_t>(oracle.dim_y()), what);
  if (batch.empty()) throw contract_error(std::string(what) + ": empty batch");
  if (batch.size() != dirs.size()) {
    throw contract_error(std::string(what) + ": |dirs| must equal |batch|");
  }
  if (!(mu > 0.0)) throw contract_error(std::string(what) + ": mu must be positive");

  const int d = ShiftX ? oracle.dim_x() : oracle.dim_y();
  Vec acc = zeros(static_cast<std::size_t>(d));
  Vec shifted;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Vec& u = dirs[i];
    require_dim(u, static_cast<std::size_t>(d), what);
    const int id = batch[i];

    double f_plus, f_base;
    if constexpr (ShiftX) {
      shifted = x;
      axpy(mu, u, shifted);
      f_plus = require_eval(oracle.value(shifted, y, id), what, id);
    } else {
      shifted = y;
      axpy(mu, u, shifted);
      f_plus = require_eval(oracle.value(x, shifted, id), what, id);
    }
    f_base = require_eval(oracle.value(x, y, id), what, id);
    counter.function_queries += 2;

    const double diff = f_plus - f_base;
    note_cancellation(diff, f_base, counter);
    axpy(diff * (static_cast<double>(d) / mu), u, acc);
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (auto& v : acc) v *= inv_b;
  return acc;
}

}  // namespace

Vec unige_partial_x(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                    std::span<const int> batch, double mu1, std::span<const Vec> dirs,
                    QueryCounter& counter) {
  return unige_partial_impl<true>(oracle, x, y, batch, mu1, dirs, counter, "unige_partial_x");
}

Vec unige_partial_y(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                    std::span<const int> batch, double mu2, std::span<const Vec> dirs,
                    QueryCounter& counter) {
  return unige_partial_impl<false>(oracle, x, y, batch, mu2, dirs, counter, "unige_partial_y");
}

McEstimate smoothed_value_mc_stats(const std::function<double(const Vec&)>& f, const Vec& x,
                                   double mu, long n_samples, const RngStream& rng) {
  if (n_samples < 1) throw contract_error("smoothed_value_mc: n_samples must be >= 1");
  const int d = static_cast<int>(x.size());
  const auto n = static_cast<std::size_t>(n_samples);

  auto moments = par::chunked_sum_sq(n, [&](std::size_t begin, std::size_t end, double& sum,
                                            double& sumsq) {
    RngStream sub = rng.child("mc." + std::to_string(begin / par::kChunk));
    Vec point(x.size());
    for (std::size_t s = begin; s < end; ++s) {
      const Vec u = sample_unit_ball(d, sub);
      for (std::size_t i = 0; i < point.size(); ++i) point[i] = x[i] + mu * u[i];
      const double v = f(point);
      sum += v;
      sumsq += v * v;
    }
  });

  McEstimate est;
  est.mean = moments.sum / static_cast<double>(n);
  if (n > 1) {
    const double var =
        std::max(0.0, (moments.sumsq - moments.sum * est.mean) / static_cast<double>(n - 1));
    est.stderr_of_mean = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

double smoothed_value_mc(const std::function<double(const Vec&)>& f, const Vec& x, double mu,
                         long n_samples, const RngStream& rng) {
  return smoothed_value_mc_stats(f, x, mu, n_samples, rng).mean;
}

}  // namespace accmm
