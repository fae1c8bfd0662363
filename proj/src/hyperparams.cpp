#include "accmm/hyperparams.hpp"

#include <cmath>

namespace accmm {

namespace {

void validate_common(const HyperParams& hp) {
  if (!(hp.gamma > 0.0)) throw contract_error("HyperParams: gamma must be positive");
  if (!(hp.k > 0.0)) throw contract_error("HyperParams: k must be positive");
  if (!(hp.m >= 1.0)) throw contract_error("HyperParams: m must be >= 1");
  if (hp.b < 1) throw contract_error("HyperParams: b must be >= 1");
  if (hp.T < 1) throw contract_error("HyperParams: T must be >= 1");
}

}  // namespace

void HyperParams::validate_mini() const {
  validate_common(*this);
  if (!(c > 0.0)) throw contract_error("HyperParams: c must be positive");
}

void HyperParams::validate_minimax() const {
  validate_common(*this);
  if (!(lambda >= 0.0)) throw contract_error("HyperParams: lambda must be non-negative");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw contract_error("HyperParams: c1, c2 must be positive");
}

double eta_schedule(int t, double k, double m) {
  if (!(k > 0.0)) throw contract_error("eta_schedule: k must be positive");
  if (!(m >= 1.0)) throw contract_error("eta_schedule: m must be >= 1");
  if (t < 0) throw contract_error("eta_schedule: t must be >= 0");
  return k / std::cbrt(m + static_cast<double>(t));
}

double momentum_coeff(double c, double eta) {
  if (!(c > 0.0)) throw contract_error("momentum_coeff: c must be positive");
  if (!(eta > 0.0)) throw contract_error("momentum_coeff: eta must be positive");
  return std::min(1.0, c * eta * eta);
}

Vec storm_combine(const Vec& g_new, const Vec& g_old, const Vec& v, double alpha) {
  require_dim(g_old, g_new.size(), "storm_combine g_old");
  require_dim(v, g_new.size(), "storm_combine v");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw contract_error("storm_combine: alpha must lie in [0, 1]");
  }
  Vec out(g_new.size());
  const double keep = 1.0 - alpha;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = g_new[i] + keep * (v[i] - g_old[i]);
  }
  return out;
}

}  // namespace accmm
