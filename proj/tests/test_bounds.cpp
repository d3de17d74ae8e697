#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "adamreg/bounds.hpp"
#include "doctest.h"

using namespace adamreg;

namespace {

TraceRecord one_step_trace(double g) {
  TraceRecord tr;
  tr.append({0.0}, {g}, 0.1, 0.9, 0.0);
  return tr;
}

TraceRecord random_trace(std::mt19937_64& rng, std::size_t d, std::int64_t T,
                         double scale = 1.0) {
  TraceRecord tr;
  tr.d = d;
  std::uniform_real_distribution<double> u(-scale, scale);
  for (std::int64_t t = 1; t <= T; ++t) {
    Vec g(d), x(d);
    for (std::size_t i = 0; i < d; ++i) {
      g[i] = u(rng);
      x[i] = u(rng);
    }
    tr.append(std::move(x), std::move(g), 0.1 / std::sqrt(static_cast<double>(t)), 0.9, 0.0);
  }
  return tr;
}

const AdamHyper kHyper{0.1, 0.99, 1e-8};

}  // namespace

TEST_CASE("sqrt-horizon bound, frozen single-step value") {
  const auto tr = one_step_trace(1.0);
  const auto r = amsgrad_bound(tr, kHyper, 0.9, 2.0);
  CHECK(r.theorem == "theorem1");
  REQUIRE(r.terms.size() == 2);
  CHECK(r.terms[0].value == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(r.terms[1].value == doctest::Approx(2.3452078799).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(22.3452078799).epsilon(1e-9));
  // The reported value is the exact sum of the terms.
  CHECK(r.value == r.terms[0].value + r.terms[1].value);

  SUBCASE("doubling D quadruples the diameter term only") {
    const auto r2 = amsgrad_bound(tr, kHyper, 0.9, 4.0);
    CHECK(r2.terms[0].value == doctest::Approx(4.0 * r.terms[0].value).epsilon(1e-12));
    CHECK(r2.terms[1].value == r.terms[1].value);
  }
  SUBCASE("zero gradients collapse to the epsilon floor") {
    const auto rz = amsgrad_bound(one_step_trace(0.0), kHyper, 0.9, 2.0);
    CHECK(rz.terms[1].value == 0.0);
    CHECK(rz.terms[0].value ==
          doctest::Approx(4.0 / (2.0 * 0.1 * 0.1) * std::sqrt(1e-8)).epsilon(1e-12));
  }
  SUBCASE("gamma >= 1 violates the precondition") {
    CHECK_THROWS_AS(amsgrad_bound(tr, AdamHyper{0.1, 0.5, 1e-8}, 0.9, 2.0),
                    precondition_error);
  }
}

TEST_CASE("absolute-sum corollary, frozen value") {
  const auto r = amsgrad_bound_cor(one_step_trace(1.0), kHyper, 0.9, 2.0, 1.0);
  CHECK(r.theorem == "corollary1");
  CHECK(r.terms[0].value == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(r.terms[1].value == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(25.5).epsilon(1e-12));
}

TEST_CASE("running-average bound, frozen value") {
  const auto r = adamnc_bound(one_step_trace(1.0), kHyper, 0.9, 2.0);
  CHECK(r.theorem == "theorem2");
  CHECK(r.terms[0].value == doctest::Approx(200.0).epsilon(1e-7));
  CHECK(r.terms[1].value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(202.0).epsilon(1e-7));
}

TEST_CASE("strongly convex bound, frozen value and precondition") {
  const AdamHyper h{10.0, 0.999, 1.0};
  const auto r = sadam_bound(one_step_trace(1.0), h, 0.9, 2.0, 1.0, 0.1);
  CHECK(r.theorem == "theorem3");
  CHECK(r.terms[0].value == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(r.terms[1].value == doctest::Approx(100.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(87.3147180560).epsilon(1e-10));

  SUBCASE("step size below G^2/mu is rejected with the required value") {
    const AdamHyper bad{9.9, 0.999, 1.0};
    try {
      sadam_bound(one_step_trace(1.0), bad, 0.9, 2.0, 1.0, 0.1);
      FAIL("expected precondition_error");
    } catch (const precondition_error& e) {
      CHECK(std::string(e.what()).find("10.0") != std::string::npos);
    }
  }
  SUBCASE("zero gradients keep only the momentum term") {
    const auto rz = sadam_bound(one_step_trace(0.0), h, 0.9, 2.0, 1.0, 0.1);
    CHECK(rz.terms[1].value == 0.0);
    CHECK(rz.value == doctest::Approx(18.0).epsilon(1e-12));
  }
  SUBCASE("beta1 = 0 removes the momentum term") {
    const auto r0 = sadam_bound(one_step_trace(1.0), h, 0.0, 2.0, 1.0, 0.1);
    CHECK(r0.terms[0].value == 0.0);
  }
}

TEST_CASE("stationarity bound agrees with an independent recomputation") {
  const AdamHyper h{0.1, 0.99, 1.0};
  const double G = 1.0, L = 1.0, f_gap = 1.0, b1 = 0.9;
  const std::size_t d = 2;
  const std::int64_t T = 100;
  const auto r = nonconvex_bound(h, b1, f_gap, G, L, d, T);

  const double gamma = 0.81 / 0.99;
  const double inv = 1.0 / std::sqrt(100.0);
  const double t1 = inv * (G / h.alpha) * f_gap;
  const double t2 = inv * G * G * G / (1.0 - b1) * (2.0 / std::sqrt(1.0));
  const double t3 = inv * G * G * G * 2.0 / (4.0 * L * h.alpha * (1.0 - b1));
  const double t4 = inv * 2.0 * G * L * 2.0 * h.alpha * (1.0 - b1) *
                    (1.0 + std::log(100.0)) / ((1.0 - h.beta2) * (1.0 - gamma));
  CHECK(r.value == doctest::Approx(t1 + t2 + t3 + t4).epsilon(1e-12));

  SUBCASE("the alternative coefficient halves the log term") {
    const auto ra = nonconvex_bound(h, b1, f_gap, G, L, d, T, true);
    CHECK(ra.terms[3].value == doctest::Approx(0.5 * r.terms[3].value).epsilon(1e-12));
  }
  SUBCASE("epsilon = 0 is rejected") {
    CHECK_THROWS_AS(nonconvex_bound(AdamHyper{0.1, 0.99, 0.0}, b1, f_gap, G, L, d, T),
                    precondition_error);
  }
}

TEST_CASE("estimated-gradient bound shares the sqrt-horizon formula") {
  const auto tr = one_step_trace(2.0);
  const auto a = amsgrad_bound(tr, kHyper, 0.9, 2.0);
  const auto z = zo_bound(tr, kHyper, 0.9, 2.0);
  CHECK(z.theorem == "proposition1");
  CHECK(z.value == a.value);
  CHECK(z.terms[0].value == a.terms[0].value);
  CHECK(z.terms[1].value == doctest::Approx(2.0 * 2.3452078799).epsilon(1e-9));
}

TEST_CASE("prefix evaluator matches the horizon bound and is monotone") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 4);
    const auto tr = random_trace(rng, d, 150);
    BoundPrefixEvaluator pe(BoundPrefixEvaluator::Theorem::AmsGrad, d, kHyper, 0.9, 2.0);
    double prev = 0.0, last = 0.0;
    for (const Vec& g : tr.g) {
      last = pe.push(g);
      CHECK(last >= prev - 1e-12 * std::abs(last));
      prev = last;
    }
    const auto full = amsgrad_bound(tr, kHyper, 0.9, 2.0);
    CHECK(last == doctest::Approx(full.value).epsilon(1e-12));
  }
  // Same agreement for the running-average and strongly convex forms.
  const auto tr = random_trace(rng, 3, 80);
  BoundPrefixEvaluator pa(BoundPrefixEvaluator::Theorem::AdamNC, 3, kHyper, 0.9, 2.0);
  BoundPrefixEvaluator ps(BoundPrefixEvaluator::Theorem::SAdam, 3,
                          AdamHyper{10.0, 0.999, 1.0}, 0.9, 2.0, 0.1);
  double la = 0.0, ls = 0.0;
  for (const Vec& g : tr.g) {
    la = pa.push(g);
    ls = ps.push(g);
  }
  CHECK(la == doctest::Approx(adamnc_bound(tr, kHyper, 0.9, 2.0).value).epsilon(1e-10));
  CHECK(ls == doctest::Approx(
                  sadam_bound(tr, AdamHyper{10.0, 0.999, 1.0}, 0.9, 2.0,
                              max_abs_gradient(tr), 0.1)
                      .value)
                  .epsilon(1e-10));
}

TEST_CASE("three-term inner-product identity") {
  SUBCASE("hand example") {
    const auto v = check_decomposition({2.0}, {1.0}, {0.5}, {0.3}, {0.0}, 0.9);
    CHECK(v.lhs == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(std::abs(v.margin) <= 1e-10);
    CHECK(v.pass);
  }
  SUBCASE("first-step collapse with zero previous momentum") {
    const auto v = check_decomposition({0.0, 0.0}, {1.0, -2.0}, {0.4, 0.4},
                                       {0.1, -0.2}, {0.0, 0.0}, 0.5);
    CHECK(v.pass);
  }
  SUBCASE("zero gradient") {
    const auto v = check_decomposition({3.0}, {0.0}, {0.5}, {0.2}, {0.1}, 0.9);
    CHECK(v.lhs == 0.0);
    CHECK(v.pass);
  }
  CHECK_THROWS_AS(check_decomposition({0.0}, {1.0}, {0.0}, {0.0}, {0.0}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("general inner-product decomposition") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const std::size_t d = 4, T = 20;
  const double b1 = 0.9;
  std::vector<Vec> A(T + 1, Vec(d)), m(T + 1, Vec(d, 0.0)), g(T, Vec(d));
  for (auto& ai : A[0]) ai = u(rng);
  for (std::size_t t = 1; t <= T; ++t) {
    for (std::size_t i = 0; i < d; ++i) {
      g[t - 1][i] = u(rng);
      A[t][i] = u(rng);
      m[t][i] = b1 * m[t - 1][i] + (1.0 - b1) * g[t - 1][i];
    }
  }
  CHECK(check_general_decomposition(A, m, g, b1).pass);

  SUBCASE("constant A still satisfies the identity") {
    std::vector<Vec> Ac(T + 1, A[0]);
    CHECK(check_general_decomposition(Ac, m, g, b1).pass);
  }
  SUBCASE("length mismatches are rejected") {
    CHECK_THROWS_AS(check_general_decomposition(A, m, {g.begin(), g.end() - 1}, b1),
                    std::invalid_argument);
  }
}

TEST_CASE("three-factor norm inequality") {
  SUBCASE("equality case") {
    const auto v = check_generalized_holder({1, 1}, {1, 1}, {1, 1}, 3, 3, 3);
    CHECK(v.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v.rhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v.pass);
  }
  SUBCASE("random triples at the (4,4,2) instantiation") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int k = 0; k < 2000; ++k) {
      const std::size_t d = 1 + static_cast<std::size_t>(k % 9);
      Vec x(d), y(d), z(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
        z[i] = u(rng);
      }
      CHECK(check_generalized_holder(x, y, z, 4, 4, 2).pass);
    }
  }
  SUBCASE("invalid exponents are rejected") {
    CHECK_THROWS_AS(check_generalized_holder({1.0}, {1.0}, {1.0}, 2, 2, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_generalized_holder({-1.0}, {1.0}, {1.0}, 4, 4, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("per-step momentum-norm bounds") {
  SUBCASE("single unit gradient, frozen values") {
    const auto vs = check_mt_bounds(one_step_trace(1.0), kHyper, 0.9,
                                    LemmaAlgorithm::AmsGrad);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].lhs == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(vs[0].rhs == doctest::Approx(0.2345207880).epsilon(1e-9));
    CHECK(vs[0].pass);
  }
  SUBCASE("zero trace") {
    for (auto alg : {LemmaAlgorithm::AmsGrad, LemmaAlgorithm::AdamNC, LemmaAlgorithm::SAdam}) {
      for (const auto& v : check_mt_bounds(one_step_trace(0.0), kHyper, 0.9, alg)) {
        CHECK(v.pass);
      }
    }
  }
  SUBCASE("random traces across all three weightings") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
      const auto tr = random_trace(rng, 1 + trial % 8, 1 + (trial * 7) % 100);
      for (auto alg : {LemmaAlgorithm::AmsGrad, LemmaAlgorithm::AdamNC, LemmaAlgorithm::SAdam}) {
        for (const auto& v : check_mt_bounds(tr, kHyper, trial % 2 ? 0.9 : 0.5, alg)) {
          CHECK(v.pass);
        }
      }
    }
  }
  SUBCASE("the summed-only lemma is rejected here") {
    CHECK_THROWS_AS(check_mt_bounds(one_step_trace(1.0), kHyper, 0.9,
                                    LemmaAlgorithm::NonconvexAmsGrad),
                    std::invalid_argument);
  }
}

TEST_CASE("weighted momentum sum bounds") {
  SUBCASE("single unit gradient, frozen value") {
    const auto v = check_sum_bounds(one_step_trace(1.0), kHyper, 0.9,
                                    LemmaAlgorithm::AmsGrad);
    CHECK(v.lhs == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(v.rhs == doctest::Approx(0.2345207880).epsilon(1e-9));
    CHECK(v.pass);
  }
  SUBCASE("random traces for all four variants") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const auto tr = random_trace(rng, 1 + trial % 8, 1 + (trial * 13) % 200);
      for (auto alg : {LemmaAlgorithm::AmsGrad, LemmaAlgorithm::AdamNC,
                       LemmaAlgorithm::SAdam, LemmaAlgorithm::NonconvexAmsGrad}) {
        CHECK(check_sum_bounds(tr, kHyper, trial % 2 ? 0.9 : 0.5, alg).pass);
      }
    }
  }
}

TEST_CASE("scalar sequence inequalities") {
  SUBCASE("frozen examples") {
    auto vs = check_sequence_inequalities({1, 1, 1, 1}, 1.0);
    CHECK(vs[0].lhs == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0) + 0.5)
                           .epsilon(1e-12));
    CHECK(vs[0].rhs == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(vs[0].pass);

    vs = check_sequence_inequalities({1, 1}, 1.0);
    CHECK(vs[1].lhs == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(vs[1].rhs == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(vs[1].pass);
  }
  SUBCASE("all zeros give equality at zero") {
    for (const auto& v : check_sequence_inequalities({0, 0, 0}, 1e-8)) {
      CHECK(v.lhs == 0.0);
      CHECK(v.rhs == 0.0);
      CHECK(v.pass);
    }
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(check_sequence_inequalities({-1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(check_sequence_inequalities({1.0}, 0.0), std::invalid_argument);
  }
  SUBCASE("random sequences") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int k = 0; k < 500; ++k) {
      Vec a(1 + static_cast<std::size_t>(k % 200));
      for (double& ai : a) ai = u(rng);
      for (const auto& v : check_sequence_inequalities(a, 1e-8)) CHECK(v.pass);
    }
  }
}

TEST_CASE("summed identity under a varying momentum schedule") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto build = [&](auto beta_at, std::size_t d, std::int64_t T) {
    TraceRecord tr;
    tr.d = d;
    for (std::int64_t t = 1; t <= T; ++t) {
      Vec g(d), x(d);
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = u(rng);
        x[i] = u(rng);
      }
      tr.append(std::move(x), std::move(g), 0.1, beta_at(t), 0.0);
    }
    return tr;
  };

  SUBCASE("constant schedule") {
    const auto tr = build([](std::int64_t) { return 0.9; }, 3, 50);
    CHECK(check_flexible_beta_identity(tr, {0.1, -0.2, 0.3}).pass);
  }
  SUBCASE("harmonic schedule") {
    const auto tr = build([](std::int64_t t) { return 0.9 / static_cast<double>(t); }, 3, 50);
    const auto v = check_flexible_beta_identity(tr, {0.0, 0.0, 0.0});
    CHECK(std::abs(v.margin) < 1e-10);
    CHECK(v.pass);
  }
  SUBCASE("all-zero schedule degenerates to the plain sum") {
    const auto tr = build([](std::int64_t) { return 0.0; }, 2, 30);
    CHECK(check_flexible_beta_identity(tr, {0.0, 0.0}).pass);
  }
  SUBCASE("increasing schedules are rejected") {
    TraceRecord tr;
    tr.d = 1;
    tr.append({0.0}, {1.0}, 0.1, 0.5, 0.0);
    tr.append({0.1}, {1.0}, 0.1, 0.9, 0.0);
    CHECK_THROWS_AS(check_flexible_beta_identity(tr, {0.0}), std::invalid_argument);
  }
}

TEST_CASE("inequality tolerance") {
  CHECK(inequality_passes(1.0, 1.0, {}));
  CHECK(inequality_passes(1.0, 1.0 - 5e-10, {}));
  CHECK_FALSE(inequality_passes(1.0, 1.0 - 1e-8, {}));
  CHECK(inequality_passes(0.0, -1e-13, {}));
}
