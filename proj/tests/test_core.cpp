#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "accmm/constraint.hpp"
#include "accmm/rng.hpp"
#include "accmm/vec.hpp"
#include "doctest.h"

using namespace accmm;

TEST_CASE("rng: equal (seed, label) reproduces the sequence exactly") {
  RngStream a(42, "sphere");
  RngStream b(42, "sphere");
  for (int i = 0; i < 10000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, "sphere");
  RngStream d(42, "sphere");
  for (int i = 0; i < 10000; ++i) {
    CHECK(c.next_normal() == d.next_normal());
  }
}

TEST_CASE("rng: distinct labels and seeds give unrelated streams") {
  RngStream a(42, "sphere");
  RngStream b(42, "minibatch");
  RngStream c(43, "sphere");
  int equal_ab = 0, equal_ac = 0;
  double mean_b = 0.0;
  for (int i = 0; i < 4096; ++i) {
    const std::uint64_t x = a.next_u64();
    const std::uint64_t y = b.next_u64();
    if (x == y) ++equal_ab;
    if (x == c.next_u64()) ++equal_ac;
    mean_b += static_cast<double>(y >> 11) * 0x1.0p-53;
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
  CHECK(mean_b / 4096 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("rng: u01 lies in [0,1) and indices cover the range") {
  RngStream r(1, "minibatch");
  bool seen[7] = {};
  for (int i = 0; i < 2000; ++i) {
    const double u = r.next_u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen[r.next_index(7)] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("rng: child streams derive deterministically") {
  RngStream parent(9, "sphere");
  RngStream c1 = parent.child("mc.0");
  RngStream c2 = RngStream(9, "sphere").child("mc.0");
  for (int i = 0; i < 100; ++i) CHECK(c1.next_u64() == c2.next_u64());
}

TEST_CASE("project: per-coordinate clamp on the Linf ball") {
  const auto set = ConstraintSet::linf_ball(2, 2.0);
  const Vec q = set.project({3.0, -1.0});
  CHECK(q[0] == 2.0);
  CHECK(q[1] == -1.0);
}

TEST_CASE("project: radial scaling on the L2 ball") {
  const auto set = ConstraintSet::l2_ball(2, 1.0);
  const Vec q = set.project({3.0, 4.0});
  CHECK(q[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("project: identity on unconstrained space") {
  const auto set = ConstraintSet::unconstrained(3);
  const Vec p = {1.0, 2.0, 3.0};
  CHECK(set.project(p) == p);
}

TEST_CASE("project: boundary point of the L2 ball is returned unchanged") {
  const auto set = ConstraintSet::l2_ball(2, 5.0);
  const Vec p = {3.0, 4.0};
  CHECK(set.project(p) == p);
}

TEST_CASE("project: contract violations") {
  const auto set = ConstraintSet::linf_ball(2, 1.0);
  CHECK_THROWS_AS(set.project({1.0}), contract_error);
  CHECK_THROWS_AS(set.project({1.0, std::nan("")}), contract_error);
  CHECK_THROWS_AS(ConstraintSet::l2_ball(2, 0.0), contract_error);
  CHECK_THROWS_AS(ConstraintSet::linf_ball(2, -1.0), contract_error);
}

TEST_CASE("project: idempotence, bitwise for the clamp") {
  RngStream rng(5, "probe");
  const auto box = ConstraintSet::linf_ball(4, 0.7);
  const auto ball = ConstraintSet::l2_ball(4, 0.7);
  for (int k = 0; k < 200; ++k) {
    Vec p(4);
    for (auto& v : p) v = 3.0 * rng.next_normal();
    const Vec q1 = box.project(p);
    CHECK(box.project(q1) == q1);
    const Vec q2 = ball.project(p);
    const Vec q3 = ball.project(q2);
    for (int i = 0; i < 4; ++i) CHECK(q3[i] == doctest::Approx(q2[i]).epsilon(1e-15));
  }
}

TEST_CASE("project: non-expansiveness over 1000 random pairs") {
  RngStream rng(11, "probe");
  const ConstraintSet sets[] = {ConstraintSet::unconstrained(3),
                                ConstraintSet::linf_ball(3, 1.3),
                                ConstraintSet::l2_ball(3, 0.9)};
  for (const auto& set : sets) {
    for (int k = 0; k < 1000; ++k) {
      Vec p(3), q(3);
      for (auto& v : p) v = 4.0 * rng.next_normal();
      for (auto& v : q) v = 4.0 * rng.next_normal();
      CHECK(dist2(set.project(p), set.project(q)) <= dist2(p, q) + 1e-12);
    }
  }
}

TEST_CASE("variational residual: hand-checked probe grids") {
  // 1-d box, p = 2 projects to q = 1; probes {-1, 0, 1}
  const auto box = ConstraintSet::linf_ball(1, 1.0);
  const std::vector<Vec> probes = {{-1.0}, {0.0}, {1.0}};
  CHECK(variational_residual(box, {2.0}, box.project({2.0}), probes) == 0.0);

  // unconstrained: q == p, residual identically 0
  const auto all = ConstraintSet::unconstrained(2);
  const std::vector<Vec> any = {{5.0, -2.0}, {0.0, 0.0}};
  CHECK(variational_residual(all, {1.0, 2.0}, {1.0, 2.0}, any) == 0.0);

  // L2 ball boundary sweep: p = (2, 0) projects to (1, 0)
  const auto ball = ConstraintSet::l2_ball(2, 1.0);
  std::vector<Vec> circle;
  for (int k = 0; k < 360; ++k) {
    const double th = 2.0 * M_PI * k / 360.0;
    circle.push_back({std::cos(th), std::sin(th)});
  }
  const double r = variational_residual(ball, {2.0, 0.0}, ball.project({2.0, 0.0}), circle);
  CHECK(r == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r >= -1e-10);
}

TEST_CASE("variational inequality holds over sampled probes for all set kinds") {
  RngStream rng(17, "probe");
  const ConstraintSet sets[] = {ConstraintSet::unconstrained(4),
                                ConstraintSet::linf_ball(4, 1.1),
                                ConstraintSet::l2_ball(4, 0.8)};
  for (const auto& set : sets) {
    for (int k = 0; k < 50; ++k) {
      Vec p(4);
      for (auto& v : p) v = 3.0 * rng.next_normal();
      const Vec q = set.project(p);
      const auto probes = probe_points(set, 200, rng);
      for (const Vec& x : probes) CHECK(set.contains(x, 1e-12));
      CHECK(variational_residual(set, p, q, probes) >= -1e-10);
    }
  }
}

TEST_CASE("projection lands inside the set for every finite input") {
  RngStream rng(23, "probe");
  const ConstraintSet sets[] = {ConstraintSet::linf_ball(6, 2.0),
                                ConstraintSet::l2_ball(6, 0.03)};
  for (const auto& set : sets) {
    for (int k = 0; k < 500; ++k) {
      Vec p(6);
      for (auto& v : p) v = 100.0 * rng.next_normal();
      CHECK(set.contains(set.project(p), 1e-12));
    }
  }
}
