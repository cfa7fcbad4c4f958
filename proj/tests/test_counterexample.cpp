#include "doctest.h"

#include "grf/counterexample.hpp"
#include "grf/kernel.hpp"
#include "test_support.hpp"

using namespace grf;
using namespace grf::counterexample;
using grf::testing::pt;

TEST_CASE("a_n values") {
  CHECK(a_n(2) == doctest::Approx(0.6744897502).epsilon(1e-10));
  CHECK(a_n(5) == doctest::Approx(1.2815515655).epsilon(1e-10));
  CHECK(a_n(100) == doctest::Approx(2.5758293035).epsilon(1e-10));
  for (int n : {2, 3, 7, 40}) {
    // P{|γ| > a_n} = 1/n.
    CHECK(2.0 * (1.0 - normal_cdf(a_n(n))) == doctest::Approx(1.0 / n).epsilon(1e-12));
    CHECK(a_n(n) == doctest::Approx(grf::testing::bisect_quantile(1.0 - 0.5 / n)).epsilon(1e-10));
  }
  CHECK_THROWS(a_n(1));
}

TEST_CASE("build_X_n layout") {
  const Config cfg{2};
  const auto f = build_X_n(cfg);
  REQUIRE(f->size() == 4);
  for (double s : f->sigmas()) CHECK(s == doctest::Approx(1.0 / 0.6744897502));
  const auto centers = bump_centers(cfg);
  CHECK(centers == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  const double rad = bump_radius(cfg);
  CHECK(rad == doctest::Approx(0.1125));
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) CHECK(centers[i] + rad < centers[i + 1] - rad);
  CHECK(centers.front() - rad > 0.0);
  CHECK(centers.back() + rad < 1.0);

  const auto k = CovarianceKernel::from_field(f);
  for (double c : centers) CHECK(k.eval(pt(c), pt(c))(0, 0) == doctest::Approx(1.0 / (a_n(2) * a_n(2))).epsilon(1e-14));
  CHECK(k.eval(pt(0.125), pt(0.375))(0, 0) == 0.0);

  // Points in distinct supports never correlate.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> off(-rad, rad);
  const Config big{5};
  const auto kb = CovarianceKernel::from_field(build_X_n(big));
  const auto cb = bump_centers(big);
  const double rb = bump_radius(big);
  for (int t = 0; t < 200; ++t) {
    const std::size_t i = rng() % cb.size(), j = rng() % cb.size();
    if (i == j) continue;
    std::uniform_real_distribution<double> u(-rb, rb);
    CHECK(kb.eval(pt(cb[i] + u(rng)), pt(cb[j] + u(rng)))(0, 0) == 0.0);
  }
}

TEST_CASE("aligned grid contains every center") {
  for (int n : {2, 5, 10, 13}) {
    const Config cfg{n};
    const Box grid = aligned_grid(cfg);
    CHECK(grid.resolution()[0] >= 256);
    CHECK(grid.resolution()[0] % (2 * n * n) == 0);
    const auto pts = grid.grid();
    for (double c : bump_centers(cfg)) {
      bool hit = false;
      for (const auto& p : pts) hit = hit || std::abs(p[0] - c) <= 1e-15;
      CHECK(hit);
    }
  }
}

TEST_CASE("exact_small_norm_prob") {
  CHECK(exact_small_norm_prob(2) == 0.0625);
  CHECK(exact_small_norm_prob(5) == doctest::Approx(std::pow(0.8, 25)).epsilon(1e-14));
  CHECK(exact_small_norm_prob(5) == doctest::Approx(3.7779e-3).epsilon(1e-4));
  double prev = 1.0;
  for (int n : {2, 5, 10, 20}) {
    const double p = exact_small_norm_prob(n);
    CHECK(p < prev);
    prev = p;
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("kernel_sup_decay") {
  const std::vector<int> ns{2, 5, 10, 50, 100};
  const auto sups = kernel_sup_decay(ns, 2);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double a = a_n(ns[i]);
    CHECK(std::abs(sups[i] - 1.0 / (a * a)) <= 1e-6);
    if (i > 0) CHECK(sups[i] < sups[i - 1]);
  }
  CHECK(sups[1] == doctest::Approx(0.6089).epsilon(1e-3));
  CHECK(sups[4] == doctest::Approx(0.1507).epsilon(1e-3));
}

TEST_CASE("build_Y_n") {
  const Config c1{2, Box({0.0}, {1.0}), 1};
  const auto f = build_X_n(c1);
  const auto zero = build_Y_n(c1, SamplePath(f, Vector::Zero(4)));
  for (double v : zero.values) CHECK(v == 0.0);
  CHECK(zero.base == doctest::Approx(-0.1).epsilon(1e-3));
  CHECK(zero.base < 0.0);

  // One bump with coefficient 1: nondecreasing, flat outside the support.
  Vector coeffs = Vector::Zero(4);
  coeffs[1] = 1.0;
  const SamplePath single(f, coeffs);
  const auto y = build_Y_n(c1, single);
  const double lo = 0.375 - bump_radius(c1), hi = 0.375 + bump_radius(c1);
  for (std::size_t i = 1; i < y.values.size(); ++i) {
    CHECK(y.values[i] >= y.values[i - 1] - 1e-12);
    if (y.nodes[i] <= lo) CHECK(y.values[i] == 0.0);
    if (y.nodes[i - 1] >= hi) CHECK(std::abs(y.values[i] - y.values[i - 1]) <= 1e-12);
  }
  CHECK(y.values.back() > 0.0);
}

TEST_CASE("r-th difference of Y_n recovers X_n") {
  const auto f = build_X_n(Config{2});
  for (std::uint64_t idx : {0u, 1u, 2u}) {
    const SamplePath path = sample(f, 11, idx);
    for (int r : {1, 2, 3}) {
      const Config cfg{2, Box({0.0}, {1.0}), r};
      const auto y = build_Y_n(cfg, path);
      CHECK(derivative_mismatch(y, path) <= 1e-4);
    }
  }
}

TEST_CASE("Monte Carlo agrees with the exact small-norm probability") {
  for (int n : {2, 5}) {
    const Row row = report_row(n, {20000, 0, 2});
    const double se = std::sqrt(row.exact_prob * (1.0 - row.exact_prob) / 20000.0);
    CHECK(std::abs(row.mc.p_hat - row.exact_prob) <= 3.0 * se);
    CHECK(row.kernel_sup == doctest::Approx(1.0 / (row.a_n * row.a_n)).epsilon(1e-12));
  }
}

TEST_CASE("X_100 does not shrink in law") {
  const Config cfg{100};
  const auto m = empirical_sup_mean(build_X_n(cfg), aligned_grid(cfg), 0, {2000, 0, 4});
  CHECK(m.p_hat >= 1.0);
}
