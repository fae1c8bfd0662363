#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "accmm/estimators.hpp"
#include "accmm/quadratic.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace accmm;
using testutil::FunctionMiniOracle;
using testutil::FunctionMinimaxOracle;

TEST_CASE("sphere sampling: unit norm and S^0 balance") {
  RngStream rng(1, "sphere");
  for (int k = 0; k < 500; ++k) {
    const Vec u = sample_unit_sphere(5, rng);
    CHECK(std::fabs(norm2(u) - 1.0) <= 1e-12);
  }
  // d = 1: the sphere is {+1, -1}; chi-square bound at p = 0.01 for 10^4 draws
  int plus = 0;
  for (int k = 0; k < 10000; ++k) {
    const Vec u = sample_unit_sphere(1, rng);
    CHECK(std::fabs(std::fabs(u[0]) - 1.0) <= 1e-15);
    if (u[0] > 0.0) ++plus;
  }
  const int minus = 10000 - plus;
  CHECK(std::abs(plus - minus) < 257);
}

TEST_CASE("sphere sampling: coordinate means vanish and E[uu'] = I/d") {
  const int d = 10;
  const int n = 100000;
  RngStream rng(2, "sphere");
  Vec mean(d, 0.0);
  std::vector<double> second(static_cast<std::size_t>(d) * d, 0.0);
  for (int k = 0; k < n; ++k) {
    const Vec u = sample_unit_sphere(d, rng);
    for (int i = 0; i < d; ++i) {
      mean[i] += u[i];
      for (int j = 0; j < d; ++j) second[static_cast<std::size_t>(i) * d + j] += u[i] * u[j];
    }
  }
  for (int i = 0; i < d; ++i) {
    CHECK(std::fabs(mean[i] / n) <= 0.02);
    for (int j = 0; j < d; ++j) {
      const double want = (i == j) ? 1.0 / d : 0.0;
      CHECK(std::fabs(second[static_cast<std::size_t>(i) * d + j] / n - want) <= 0.02);
    }
  }
}

TEST_CASE("ball sampling: squared radius has mean d/(d+2)") {
  RngStream rng(3, "sphere");
  const int d = 2;
  double acc = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const Vec u = sample_unit_ball(d, rng);
    acc += dot(u, u);
  }
  CHECK(acc / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("unige_grad: constant function gives the zero vector") {
  const FunctionMiniOracle oracle(3, [](const Vec&, int) { return 4.2; });
  RngStream rng(4, "sphere");
  QueryCounter counter;
  const Vec u = sample_unit_sphere(3, rng);
  const Vec g = unige_grad(oracle, {0.1, 0.2, 0.3}, 0, 0.05, u, counter);
  for (double v : g) CHECK(v == 0.0);
  CHECK(counter.function_queries == 2);
  // an exactly-zero difference trips the cancellation guard
  CHECK(counter.cancellation_warnings == 1);
}

TEST_CASE("unige_grad: exact for linear functions along the direction") {
  // f(x) = a.x with a = (1, 0): estimate along u = (1, 0) is d*(a.u)*u = (2, 0)
  const FunctionMiniOracle oracle(2, [](const Vec& x, int) { return x[0]; });
  QueryCounter counter;
  const Vec g = unige_grad(oracle, {0.0, 0.0}, 0, 0.1, {1.0, 0.0}, counter);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g[1] == 0.0);
}

TEST_CASE("unige_grad: estimate is parallel to its direction") {
  const QuadraticMini oracle = quadratic_mini(4, 99);
  RngStream rng(5, "sphere");
  QueryCounter counter;
  const Vec x = {0.3, -0.7, 1.1, 0.2};
  for (int k = 0; k < 50; ++k) {
    const Vec u = sample_unit_sphere(4, rng);
    const Vec g = unige_grad(oracle, x, k % 2, 0.01, u, counter);
    // g = s*u for scalar s: check cross terms vanish
    const double s = dot(g, u);
    for (int i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(s * u[i]).epsilon(1e-9));
  }
}

TEST_CASE("unige mean converges to the true gradient on quadratics") {
  const QuadraticMini oracle = quadratic_mini(4, 123, 0.2);
  const Vec x = {0.5, -0.2, 0.8, 0.1};
  const Vec want = oracle.true_grad(x);
  RngStream dirs(6, "sphere");
  RngStream ids(6, "minibatch");
  QueryCounter counter;
  Vec mean(4, 0.0);
  const int n = 200000;
  const double mu = 1e-3;
  for (int k = 0; k < n; ++k) {
    const Vec u = sample_unit_sphere(4, dirs);
    axpy(1.0, unige_grad(oracle, x, ids.next_index(oracle.population_size()), mu, u, counter),
         mean);
  }
  for (auto& v : mean) v /= n;
  // additive noise cancels inside the two-point difference; the remaining
  // error is Monte-Carlo, about sqrt(d)/sqrt(n) relative
  CHECK(dist2(mean, want) / norm2(want) <= 0.03);
  CHECK(counter.function_queries == 2ull * n);
}

TEST_CASE("partial estimators: batch accounting and y-independence") {
  const FunctionMinimaxOracle oracle(
      2, 3, [](const Vec& x, const Vec&, int) { return x[0] + 2.0 * x[1]; });
  RngStream dx(7, "sphere"), dy(7, "sphere.y");
  QueryCounter counter;
  const std::vector<int> batch = {0, 1, 0, 1, 0};
  std::vector<Vec> dirs_x, dirs_y;
  for (int i = 0; i < 5; ++i) {
    dirs_x.push_back(sample_unit_sphere(2, dx));
    dirs_y.push_back(sample_unit_sphere(3, dy));
  }
  const Vec x = {0.0, 0.0};
  const Vec y = {1.0, 1.0, 1.0};
  const Vec gy = unige_partial_y(oracle, x, y, batch, 0.05, dirs_y, counter);
  for (double v : gy) CHECK(v == 0.0);  // objective ignores y
  CHECK(counter.function_queries == 10);
  const Vec gx = unige_partial_x(oracle, x, y, batch, 0.05, dirs_x, counter);
  CHECK(counter.function_queries == 20);
  CHECK(gx.size() == 2);
}

TEST_CASE("partial estimators: x-estimate matches hand evaluation for bilinear objective") {
  // f(x, y) = x.y with d1 = d2 = 3: along u = e1 the estimate is d1*(u.y)*u
  const FunctionMinimaxOracle oracle(3, 3,
                                     [](const Vec& x, const Vec& y, int) { return dot(x, y); });
  QueryCounter counter;
  const std::vector<int> batch = {0};
  const std::vector<Vec> dirs = {{1.0, 0.0, 0.0}};
  const Vec y = {1.0, 0.0, 0.0};
  const Vec g = unige_partial_x(oracle, {0.0, 0.0, 0.0}, y, batch, 0.1, dirs, counter);
  CHECK(g[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 0.0);
}

TEST_CASE("partial estimators: batch mean approaches the partial gradient") {
  const QuadraticSaddle oracle = quadratic_saddle(3, 3, 11, 1.0, 0.1);
  const Vec x = {0.4, -0.3, 0.6};
  const Vec y = {0.2, 0.1, -0.5};
  const Vec want = oracle.full_grad_x(x, y);
  RngStream dx(8, "sphere");
  RngStream ids(8, "minibatch");
  QueryCounter counter;
  const int b = 20000;
  std::vector<int> batch;
  std::vector<Vec> dirs;
  for (int i = 0; i < b; ++i) {
    batch.push_back(ids.next_index(oracle.population_size()));
    dirs.push_back(sample_unit_sphere(3, dx));
  }
  const Vec est = unige_partial_x(oracle, x, y, batch, 1e-4, dirs, counter);
  CHECK(dist2(est, want) / norm2(want) <= 0.03);
  CHECK(counter.function_queries == 2ull * b);
}

TEST_CASE("estimator contract violations") {
  const FunctionMiniOracle oracle(2, [](const Vec& x, int) { return x[0]; });
  QueryCounter counter;
  CHECK_THROWS_AS(unige_grad(oracle, {0.0, 0.0}, 0, 0.0, {1.0, 0.0}, counter), contract_error);
  CHECK_THROWS_AS(unige_grad(oracle, {0.0}, 0, 0.1, {1.0, 0.0}, counter), contract_error);

  const FunctionMinimaxOracle mm(2, 2, [](const Vec&, const Vec&, int) { return 0.0; });
  const std::vector<Vec> dirs;
  CHECK_THROWS_AS(unige_partial_x(mm, {0.0, 0.0}, {0.0, 0.0}, std::vector<int>{}, 0.1, dirs,
                                  counter),
                  contract_error);
}

TEST_CASE("non-finite oracle values surface as evaluation errors") {
  const FunctionMiniOracle oracle(1, [](const Vec& x, int) {
    return x[0] > 0.05 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  });
  QueryCounter counter;
  CHECK_THROWS_AS(unige_grad(oracle, {0.0}, 3, 0.1, {1.0}, counter), evaluation_error);
}

TEST_CASE("smoothed value MC: constants are exact, ball moment matches") {
  RngStream rng(9, "mc");
  const auto constant = [](const Vec&) { return 3.25; };
  CHECK(smoothed_value_mc(constant, {0.0, 0.0}, 0.7, 5000, rng) == doctest::Approx(3.25));

  // f(x) = ||x||^2 at 0 with mu = 1: E||u_ball||^2 = d/(d+2) = 0.5 for d = 2
  const auto sqnorm = [](const Vec& x) { return dot(x, x); };
  const McEstimate est = smoothed_value_mc_stats(sqnorm, {0.0, 0.0}, 1.0, 1000000, rng);
  CHECK(est.mean == doctest::Approx(0.5).epsilon(0.005));
  CHECK(est.stderr_of_mean > 0.0);
  CHECK(est.stderr_of_mean < 0.001);
}

TEST_CASE("smoothing bound |f_mu - f| <= mu^2 L / 2 on a quadratic") {
  const QuadraticMini oracle = quadratic_mini(3, 21);
  const double lips = *oracle.smoothness();
  RngStream rng(10, "mc");
  RngStream xs(10, "probe");
  const auto f = [&](const Vec& x) { return oracle.full_value(x); };
  for (double mu : {1e-1, 1e-2}) {
    for (int k = 0; k < 5; ++k) {
      Vec x(3);
      for (auto& v : x) v = xs.next_normal();
      const McEstimate est = smoothed_value_mc_stats(f, x, mu, 200000, rng.child("pt"));
      CHECK(std::fabs(est.mean - f(x)) <= 0.5 * mu * mu * lips + 3.0 * est.stderr_of_mean);
    }
  }
}

TEST_CASE("default smoothing radii follow the schedule bounds") {
  CHECK(default_mu(4, 3.0, 97) == doctest::Approx(1.0 / (4.0 * std::pow(100.0, 2.0 / 3.0))));
  CHECK(default_mu1(6, 2.0, 98) == doctest::Approx(1.0 / (6.0 * std::pow(100.0, 2.0 / 3.0))));
  CHECK(default_mu2(6, 4, 2.0, 98) ==
        doctest::Approx(1.0 / (std::sqrt(10.0) * 4.0 * std::pow(100.0, 2.0 / 3.0))));
}
