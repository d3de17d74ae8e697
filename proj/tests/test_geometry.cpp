#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "adamreg/geometry.hpp"
#include "doctest.h"

using namespace adamreg;

namespace {

Vec rand_vec(std::mt19937_64& rng, std::size_t d, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(d);
  for (double& x : v) x = u(rng);
  return v;
}

double wdist(const Vec& a, const Vec& b, const WeightVector& w) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return std::sqrt(weighted_norm_sq(d, w));
}

}  // namespace

TEST_CASE("weight vectors must be strictly positive and finite") {
  CHECK_NOTHROW(WeightVector({1.0, 0.5}));
  CHECK_THROWS_AS(WeightVector({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector({std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector({}), std::invalid_argument);
}

TEST_CASE("weighted norm") {
  const WeightVector w({2.0, 3.0});
  CHECK(weighted_norm_sq({1.0, -2.0}, w) == doctest::Approx(2.0 + 12.0));
}

TEST_CASE("set construction and diameter") {
  auto box = FeasibleSet::box({-1, -1, -1}, {1, 1, 1});
  CHECK(box.infinity_diameter() == 2.0);
  auto ball = FeasibleSet::ball({0, 0}, 0.5);
  CHECK(ball.infinity_diameter() == 1.0);
  auto rect = FeasibleSet::box({0, 0}, {1, 3});
  CHECK(rect.infinity_diameter() == 3.0);

  CHECK_THROWS_AS(FeasibleSet::box({1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::ball({0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::ball({0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("membership") {
  auto box = FeasibleSet::box({-1, -1}, {1, 1});
  CHECK(box.contains({0.0, 0.0}));
  CHECK(box.contains({1.0, -1.0}));
  CHECK_FALSE(box.contains({1.1, 0.0}));
  auto ball = FeasibleSet::ball({1, 0}, 1.0);
  CHECK(ball.contains({2.0, 0.0}));
  CHECK_FALSE(ball.contains({2.0, 0.5}));
}

TEST_CASE("box projection clamps coordinate-wise, independent of weights") {
  auto box = FeasibleSet::box({-1, -1}, {1, 1});
  const Vec y = {2.5, -0.25};
  const Vec p1 = project(box, WeightVector({1.0, 1.0}), y);
  const Vec p2 = project(box, WeightVector({9.0, 0.01}), y);
  CHECK(p1 == Vec{1.0, -0.25});
  CHECK(p1 == p2);
}

TEST_CASE("unit-weight ball projection is radial") {
  auto ball = FeasibleSet::ball({0, 0}, 1.0);
  const WeightVector w({1.0, 1.0});
  const Vec p = project(ball, w, {3.0, 4.0});
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-12));
  // Interior points are untouched.
  const Vec q = project(ball, w, {0.1, -0.2});
  CHECK(q == Vec{0.1, -0.2});
}

TEST_CASE("weighted ball projection satisfies the stationarity system") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 5);
    const Vec c = rand_vec(rng, d, -1, 1);
    const double r = 0.4 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    auto ball = FeasibleSet::ball(c, r);
    Vec w = rand_vec(rng, d, 0.1, 10.0);
    const WeightVector wv(w);
    const Vec y = rand_vec(rng, d, -6, 6);
    const Vec p = project(ball, wv, y);
    REQUIRE(ball.contains(p, 1e-9));
    if (ball.contains(y)) {
      CHECK(p == y);
      continue;
    }
    // w_i (y_i - p_i) = lambda (p_i - c_i) for a single lambda >= 0.
    double num = 0.0, den = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      num += w[i] * (y[i] - p[i]) * (p[i] - c[i]);
      den += (p[i] - c[i]) * (p[i] - c[i]);
      scale = std::max(scale, std::abs(w[i] * (y[i] - p[i])));
    }
    const double lambda = num / den;
    CHECK(lambda >= -1e-12);
    for (std::size_t i = 0; i < d; ++i) {
      const double res = w[i] * (y[i] - p[i]) - lambda * (p[i] - c[i]);
      CHECK(std::abs(res) <= 1e-10 * (1.0 + scale));
    }
    // On the sphere for exterior points.
    double nrm = 0.0;
    for (std::size_t i = 0; i < d; ++i) nrm += (p[i] - c[i]) * (p[i] - c[i]);
    CHECK(std::sqrt(nrm) == doctest::Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("weighted ball projection agrees with a fine angular grid in 2d") {
  std::mt19937_64 rng(11);
  auto ball = FeasibleSet::ball({0.3, -0.2}, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    Vec w = rand_vec(rng, 2, 0.2, 5.0);
    const WeightVector wv(w);
    Vec y = rand_vec(rng, 2, -5, 5);
    if (ball.contains(y)) continue;
    const Vec p = project(ball, wv, y);
    const double dp = wdist(p, y, wv);
    double best = 1e300;
    for (double th = 0.0; th < 2.0 * 3.14159265358979; th += 1e-4) {
      const Vec q = {0.3 + 1.5 * std::cos(th), -0.2 + 1.5 * std::sin(th)};
      best = std::min(best, wdist(q, y, wv));
    }
    // Grid slack: boundary curve is Lipschitz in the angle.
    CHECK(dp <= best + 1e-3);
    CHECK(best <= dp + 1e-3);
  }
}

TEST_CASE("projection properties over random instances") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 4000; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 16);
    FeasibleSet set = trial % 2 == 0
                          ? FeasibleSet::box(rand_vec(rng, d, -2, -0.1), rand_vec(rng, d, 0.1, 2))
                          : FeasibleSet::ball(rand_vec(rng, d, -1, 1),
                                              0.3 + std::uniform_real_distribution<double>(0, 2)(rng));
    const WeightVector wv(rand_vec(rng, d, 0.05, 20.0));
    const Vec y1 = rand_vec(rng, d, -4, 4), y2 = rand_vec(rng, d, -4, 4);
    const Vec p1 = project(set, wv, y1), p2 = project(set, wv, y2);
    CHECK(set.contains(p1, 1e-12 + 1e-9));
    CHECK(wdist(p1, p2, wv) <= wdist(y1, y2, wv) + 1e-10);
    const Vec pp = project(set, wv, p1);
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(pp[i] - p1[i]) <= 1e-12);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  auto box = FeasibleSet::box({-1, -1}, {1, 1});
  CHECK_THROWS_AS(project(box, WeightVector({1.0}), {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(project(box, WeightVector({1.0, 1.0}), {0.0}), std::invalid_argument);
}
