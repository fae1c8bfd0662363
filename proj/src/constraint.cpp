#include "accmm/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accmm/errors.hpp"

namespace accmm {

ConstraintSet::ConstraintSet(SetKind kind, int dim, double radius)
    : kind_(kind), dim_(dim), radius_(radius) {
  if (dim <= 0) throw contract_error("ConstraintSet: dim must be positive");
  if (kind != SetKind::Unconstrained && !(radius > 0.0)) {
    throw contract_error("ConstraintSet: radius must be strictly positive");
  }
}

ConstraintSet ConstraintSet::unconstrained(int dim) {
  return ConstraintSet(SetKind::Unconstrained, dim, std::numeric_limits<double>::infinity());
}

ConstraintSet ConstraintSet::linf_ball(int dim, double radius) {
  return ConstraintSet(SetKind::LinfBall, dim, radius);
}

ConstraintSet ConstraintSet::l2_ball(int dim, double radius) {
  return ConstraintSet(SetKind::L2Ball, dim, radius);
}

Vec ConstraintSet::project(const Vec& p) const {
  require_dim(p, static_cast<std::size_t>(dim_), "project");
  require_finite(p, "project");
  switch (kind_) {
    case SetKind::Unconstrained:
      return p;
    case SetKind::LinfBall: {
      Vec q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        q[i] = std::clamp(p[i], -radius_, radius_);
      }
      return q;
    }
    case SetKind::L2Ball: {
      const double n = norm2(p);
      if (n <= radius_) return p;
      return scaled(p, radius_ / n);
    }
  }
  throw contract_error("project: unknown set kind");
}

bool ConstraintSet::contains(const Vec& p, double tol) const {
  if (p.size() != static_cast<std::size_t>(dim_)) return false;
  switch (kind_) {
    case SetKind::Unconstrained:
      return all_finite(p);
    case SetKind::LinfBall:
      return norm_inf(p) <= radius_ + tol;
    case SetKind::L2Ball:
      return norm2(p) <= radius_ + tol;
  }
  return false;
}

double variational_residual(const ConstraintSet& set, const Vec& p, const Vec& q,
                            std::span<const Vec> probes) {
  require_dim(p, static_cast<std::size_t>(set.dim()), "variational_residual");
  require_dim(q, static_cast<std::size_t>(set.dim()), "variational_residual");
  const Vec qp = sub(q, p);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& x : probes) {
    require_dim(x, static_cast<std::size_t>(set.dim()), "variational_residual probe");
    best = std::min(best, dot(qp, sub(x, q)));
  }
  return best;
}

std::vector<Vec> probe_points(const ConstraintSet& set, int count, RngStream& rng) {
  std::vector<Vec> probes;
  probes.reserve(static_cast<std::size_t>(count));
  const int d = set.dim();
  for (int k = 0; k < count; ++k) {
    Vec x(static_cast<std::size_t>(d));
    switch (set.kind()) {
      case SetKind::Unconstrained:
        for (auto& v : x) v = 4.0 * rng.next_normal();
        break;
      case SetKind::LinfBall:
        for (auto& v : x) v = set.radius() * (2.0 * rng.next_u01() - 1.0);
        break;
      case SetKind::L2Ball: {
        double n2 = 0.0;
        for (auto& v : x) {
          v = rng.next_normal();
          n2 += v * v;
        }
        const double n = std::sqrt(n2);
        // radius scaled so the points fill the ball, boundary included
        const double r = set.radius() * std::pow(rng.next_u01(), 1.0 / d);
        if (n > 0.0) {
          for (auto& v : x) v *= r / n;
        }
        break;
      }
    }
    probes.push_back(std::move(x));
  }
  return probes;
}

}  // namespace accmm
