#pragma once

#include <span>
#include <vector>

#include "accmm/rng.hpp"
#include "accmm/vec.hpp"

namespace accmm {

enum class SetKind { Unconstrained, LinfBall, L2Ball };

// Convex constraint set with an exact Euclidean projection:
//   Unconstrained -> identity
//   LinfBall(r)   -> per-coordinate clamp to [-r, r]
//   L2Ball(r)     -> radial scaling by r/||p|| when ||p|| > r
// A point exactly on the L2 boundary is returned unchanged (no
// renormalization drift).
class ConstraintSet {
 public:
  static ConstraintSet unconstrained(int dim);
  static ConstraintSet linf_ball(int dim, double radius);
  static ConstraintSet l2_ball(int dim, double radius);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  bool is_unconstrained() const { return kind_ == SetKind::Unconstrained; }

  Vec project(const Vec& p) const;
  bool contains(const Vec& p, double tol = 1e-12) const;

 private:
  ConstraintSet(SetKind kind, int dim, double radius);

  SetKind kind_;
  int dim_;
  double radius_;
};

// Minimum of <q - p, x - q> over the probe points, where q = project(set, p).
// The projection variational inequality predicts a non-negative minimum
// whenever the probes lie in the set. Test-side oracle.
double variational_residual(const ConstraintSet& set, const Vec& p, const Vec& q,
                            std::span<const Vec> probes);

// Random members of the set (exact members, not approximate).
std::vector<Vec> probe_points(const ConstraintSet& set, int count, RngStream& rng);

}  // namespace accmm
