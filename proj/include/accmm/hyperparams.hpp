#pragma once

#include "accmm/estimators.hpp"
#include "accmm/vec.hpp"

namespace accmm {

// Every tunable of the momentum methods. gamma scales the primal step,
// lambda the dual step; eta_t = k / (m+t)^{1/3} is the shared decay; the
// momentum weights are c*eta^2 (mini) and c1*eta^2 / c2*eta^2 (minimax).
// Baselines reuse gamma/lambda as their fixed step sizes.
struct HyperParams {
  double gamma = 0.1;
  double lambda = 0.1;
  double k = 1.0;
  double m = 3.0;
  double c = 3.0;
  double c1 = 3.0;
  double c2 = 3.0;
  int b = 1;
  int T = 1000;
  SmoothingParams smoothing;

  void validate_mini() const;
  void validate_minimax() const;
};

double eta_schedule(int t, double k, double m);

// min(1, c * eta^2). The clamp keeps the recursion well posed when c*eta^2
// exceeds 1 (it does under the published experimental settings); at the clamp
// the update degenerates to a vanilla stochastic gradient.
double momentum_coeff(double c, double eta);

// g_new + (1 - alpha) * (v - g_old)
Vec storm_combine(const Vec& g_new, const Vec& g_old, const Vec& v, double alpha);

}  // namespace accmm
