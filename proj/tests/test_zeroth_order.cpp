#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "adamreg/zeroth_order.hpp"
#include "doctest.h"

using namespace adamreg;

TEST_CASE("sphere samples have unit norm") {
  std::mt19937_64 rng(1);
  for (std::size_t d : {1u, 2u, 5u, 16u}) {
    for (int k = 0; k < 500; ++k) {
      const Vec u = sample_unit_sphere(d, rng);
      double n = 0.0;
      for (double ui : u) n += ui * ui;
      CHECK(std::abs(std::sqrt(n) - 1.0) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(sample_unit_sphere(0, rng), std::invalid_argument);
}

TEST_CASE("one-dimensional sphere samples are signs, both occurring") {
  std::mt19937_64 rng(2);
  int pos = 0, neg = 0;
  for (int k = 0; k < 2000; ++k) {
    const Vec u = sample_unit_sphere(1, rng);
    CHECK(std::abs(std::abs(u[0]) - 1.0) <= 1e-12);
    (u[0] > 0 ? pos : neg)++;
  }
  CHECK(pos > 800);
  CHECK(neg > 800);
}

TEST_CASE("empirical second moment of sphere samples is I/d") {
  std::mt19937_64 rng(3);
  const std::size_t d = 3;
  const int n = 1000000;
  std::vector<Vec> M(d, Vec(d, 0.0));
  for (int k = 0; k < n; ++k) {
    const Vec u = sample_unit_sphere(d, rng);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) M[i][j] += u[i] * u[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double expected = i == j ? 1.0 / static_cast<double>(d) : 0.0;
      CHECK(std::abs(M[i][j] / n - expected) <= 5e-3);
    }
  }
}

TEST_CASE("ball samples stay inside the unit ball") {
  std::mt19937_64 rng(4);
  double max_n = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const Vec u = sample_unit_ball(3, rng);
    double n = 0.0;
    for (double ui : u) n += ui * ui;
    CHECK(n <= 1.0 + 1e-12);
    max_n = std::max(max_n, std::sqrt(n));
  }
  CHECK(max_n > 0.99);  // the boundary is reached in distribution
}

TEST_CASE("two-point estimator on a linear function") {
  std::mt19937_64 rng(5);
  const Vec c = {3.0, 5.0};
  auto f = [&](const Vec& p) { return c[0] * p[0] + c[1] * p[1]; };
  const ZoConfig cfg{0.1, 2, 0};
  const Vec x = {0.5, -1.0};

  SUBCASE("exact relation to the drawn direction") {
    // For linear f the estimate equals d <c, u> u; recover u from the output.
    for (int k = 0; k < 500; ++k) {
      const Vec g = estimate_gradient(f, x, cfg, rng);
      double n = std::hypot(g[0], g[1]);
      if (n == 0.0) continue;
      const Vec u = {g[0] / n, g[1] / n};
      const double proj = c[0] * u[0] + c[1] * u[1];
      CHECK(g[0] == doctest::Approx(2.0 * proj * u[0]).epsilon(1e-9));
      CHECK(g[1] == doctest::Approx(2.0 * proj * u[1]).epsilon(1e-9));
    }
  }
  SUBCASE("mean over many draws is the gradient, within 3 standard errors") {
    const int n = 1000000;
    Vec mean(2, 0.0), m2(2, 0.0);
    for (int k = 1; k <= n; ++k) {
      const Vec g = estimate_gradient(f, x, cfg, rng);
      for (std::size_t i = 0; i < 2; ++i) {
        const double delta = g[i] - mean[i];
        mean[i] += delta / k;
        m2[i] += delta * (g[i] - mean[i]);
      }
    }
    for (std::size_t i = 0; i < 2; ++i) {
      const double se = std::sqrt(m2[i] / (n - 1.0) / n);
      CHECK(std::abs(mean[i] - c[i]) <= 3.0 * se);
    }
  }
}

TEST_CASE("constant functions estimate a zero gradient") {
  std::mt19937_64 rng(6);
  auto f = [](const Vec&) { return 7.0; };
  const ZoConfig cfg{0.05, 3, 0};
  for (int k = 0; k < 100; ++k) {
    CHECK(estimate_gradient(f, {0.1, 0.2, 0.3}, cfg, rng) == Vec(3, 0.0));
  }
}

TEST_CASE("estimator input validation") {
  std::mt19937_64 rng(7);
  auto bad = [](const Vec&) { return std::nan(""); };
  const ZoConfig cfg{0.1, 2, 0};
  CHECK_THROWS_AS(estimate_gradient(bad, {0.0, 0.0}, cfg, rng), std::invalid_argument);
  CHECK_THROWS_AS(estimate_gradient([](const Vec&) { return 0.0; }, {0.0}, cfg, rng),
                  std::invalid_argument);
  ZoConfig zero_mu{0.0, 2, 0};
  CHECK_THROWS_AS(estimate_gradient([](const Vec&) { return 0.0; }, {0.0, 0.0}, zero_mu, rng),
                  std::invalid_argument);
}

TEST_CASE("smoothed value estimates") {
  std::mt19937_64 rng(8);
  SUBCASE("linear functions are unchanged by smoothing") {
    auto f = [](const Vec& p) { return 2.0 * p[0] - p[1]; };
    const ZoConfig cfg{0.3, 2, 0};
    const Vec x = {0.4, 0.6};
    const auto est = smoothed_value_mc(f, x, cfg, 200000, rng);
    CHECK(std::abs(est.mean - f(x)) <= 3.0 * est.std_err);
  }
  SUBCASE("constant functions give zero variance") {
    auto f = [](const Vec&) { return 4.0; };
    const auto est = smoothed_value_mc(f, {0.0}, ZoConfig{0.5, 1, 0}, 1000, rng);
    CHECK(est.mean == 4.0);
    CHECK(est.std_err == 0.0);
  }
  SUBCASE("smoothing bias respects the Lipschitz bound") {
    // f(x) = sum |x_i| has 2-norm Lipschitz constant sqrt(d).
    const std::size_t d = 3;
    auto f = [](const Vec& p) {
      double s = 0.0;
      for (double pi : p) s += std::abs(pi);
      return s;
    };
    const double mu = 0.2;
    const Vec x = {0.5, -1.0, 0.25};
    const auto est = smoothed_value_mc(f, x, ZoConfig{mu, d, 0}, 200000, rng);
    CHECK(std::abs(est.mean - f(x)) <= mu * std::sqrt(3.0) + 3.0 * est.std_err);
  }
  SUBCASE("sample count must be positive") {
    CHECK_THROWS_AS(smoothed_value_mc([](const Vec&) { return 0.0; }, {0.0},
                                      ZoConfig{0.1, 1, 0}, 0, rng),
                    std::invalid_argument);
  }
}
