#include "doctest.h"

#include "grf/errors.hpp"
#include "grf/field.hpp"
#include "grf/kernel.hpp"
#include "test_support.hpp"

using namespace grf;
using grf::testing::pt;

namespace {

FieldPtr affine_field() {
  return make_field(KLField(1, 1, {BasisFunction::monomial_1d(0), BasisFunction::monomial_1d(1)}));
}

}  // namespace

TEST_CASE("sample examples") {
  const auto empty = make_field(KLField::empty(1, 1));
  const SamplePath z = sample(empty, 0, 0);
  CHECK(z.eval(pt(0.3))[0] == 0.0);

  const auto constant = make_field(KLField(1, 1, {BasisFunction::monomial_1d(0)}));
  // Constant paths, variance 1 ± 0.02 over 1e5 draws.
  const std::size_t n = 100000;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SamplePath s = sample(constant, 42, i);
    CHECK(s.eval(pt(0.0))[0] == s.eval(pt(0.9))[0]);
    sum_sq += s.coeffs()[0] * s.coeffs()[0];
  }
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));

  // Paths of {1, t} are affine.
  const SamplePath a = sample(affine_field(), 1, 7);
  const double v0 = a.eval(pt(0.0))[0], v1 = a.eval(pt(1.0))[0];
  CHECK(a.eval(pt(0.25))[0] == doctest::Approx(v0 + 0.25 * (v1 - v0)).epsilon(1e-14));
}

TEST_CASE("sampling respects sigmas and is deterministic") {
  const auto f = make_field(KLField(1, 1, {BasisFunction::monomial_1d(0), BasisFunction::monomial_1d(1)}, {2.0, 0.5}));
  const SamplePath s1 = sample(f, 99, 3);
  const SamplePath s2 = sample(f, 99, 3);
  CHECK(s1.coeffs() == s2.coeffs());
  RandomStream rng(99, 3);
  CHECK(s1.coeffs()[0] == 2.0 * rng.normal());
  CHECK(s1.coeffs()[1] == 0.5 * rng.normal());
  CHECK(sample(f, 99, 4).coeffs() != s1.coeffs());
}

TEST_CASE("eval_sample examples and linearity") {
  const auto f = affine_field();
  const SamplePath s(f, (Vector(2) << 2.0, 3.0).finished());
  CHECK(s.eval(pt(4.0))[0] == 14.0);
  for (double x : {-1.0, 0.0, 5.0}) CHECK(s.eval(pt(x), MultiIndex{1})[0] == 3.0);
  CHECK(SamplePath(f, Vector::Zero(2)).eval(pt(1.0))[0] == 0.0);

  std::mt19937_64 rng(8);
  const auto g = grf::testing::random_field(rng, 2, 2, 6, true);
  const SamplePath a = sample(g, 1, 0), b = sample(g, 1, 1);
  const SamplePath c = a + b;
  for (int i = 0; i < 10; ++i) {
    const Point p = grf::testing::random_point(rng, 2);
    for (const auto& alpha : multi_indices_up_to(2, 2))
      CHECK((c.eval(p, alpha) - a.eval(p, alpha) - b.eval(p, alpha)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("sample_seminorm examples") {
  const Box unit({0.0}, {1.0});
  const auto t = make_field(KLField(1, 1, {BasisFunction::monomial_1d(1)}));
  CHECK(sample_seminorm(SamplePath(t, Vector::Zero(1)), unit, 2) == 0.0);
  const SamplePath path(t, Vector::Ones(1));
  CHECK(sample_seminorm(path, unit, 0) == 1.0);
  CHECK(sample_seminorm(path, unit, 1) == 1.0);
  const SamplePath steep(t, Vector::Constant(1, -3.0));
  CHECK(sample_seminorm(steep, unit, 1) == 3.0);
}

TEST_CASE("support_basis examples") {
  const auto one = make_field(KLField(1, 1, {BasisFunction::monomial_1d(0)}));
  const auto h1 = support_basis(one, pt(0.7), 0);
  CHECK(h1.function.eval(pt(-3.0))[0] == 1.0);

  const auto h = support_basis(affine_field(), pt(2.0), 0);
  CHECK(h.function.coeffs()[0] == 1.0);
  CHECK(h.function.coeffs()[1] == 2.0);
  CHECK(h.function.eval(pt(3.0))[0] == 7.0);

  const auto empty = make_field(KLField::empty(1, 1));
  CHECK(support_basis(empty, pt(0.5), 0).function.eval(pt(0.1))[0] == 0.0);
  CHECK_THROWS_AS(support_basis(empty, pt(0.5), 1), std::out_of_range);
}

TEST_CASE("support functions reproduce kernel columns") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = grf::testing::random_field(rng, 2, 3, 5, true);
    const auto k = CovarianceKernel::from_field(f);
    const Point p = grf::testing::random_point(rng, 2);
    for (int j = 0; j < 3; ++j) {
      const auto h = support_basis(f, p, j);
      for (int i = 0; i < 50; ++i) {
        const Point q = grf::testing::random_point(rng, 2);
        CHECK((h.function.eval(q) - k.eval(q, p).col(j)).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("cm_inner") {
  CHECK(cm_inner(affine_field(), pt(2.0), 0, pt(3.0), 0) == doctest::Approx(7.0));
  CHECK(cm_inner(make_field(KLField::empty(1, 1)), pt(2.0), 0, pt(3.0), 0) == 0.0);
  std::mt19937_64 rng(13);
  const auto f = grf::testing::random_field(rng, 1, 2, 6, true);
  const auto k = CovarianceKernel::from_field(f);
  for (int i = 0; i < 100; ++i) {
    const Point p = grf::testing::random_point(rng, 1), q = grf::testing::random_point(rng, 1);
    const int j = static_cast<int>(rng() % 2), l = static_cast<int>(rng() % 2);
    CHECK(std::abs(cm_inner(f, p, j, q, l) - k.eval(p, q)(j, l)) <= 1e-12);
    CHECK(cm_inner(f, p, j, p, j) >= 0.0);
  }
}

TEST_CASE("projection_residual") {
  const Box unit({0.0}, {1.0});
  std::mt19937_64 rng(14);
  const auto f = grf::testing::random_field(rng, 1, 1, 4);
  CHECK(projection_residual(*f, sample(f, 0, 0), unit) <= 1e-9);
  CHECK(projection_residual(*f, support_basis(f, pt(0.3), 0).function, unit) <= 1e-9);

  // Constant 1 onto span{t} on the 257-point grid: brute-force normal equation.
  const auto t = make_field(KLField(1, 1, {BasisFunction::monomial_1d(1)}));
  double st = 0.0, tt = 0.0;
  const auto pts = unit.grid();
  for (const auto& p : pts) {
    st += p[0];
    tt += p[0] * p[0];
  }
  const double c = st / tt;
  double rss = 0.0;
  for (const auto& p : pts) rss += (1.0 - c * p[0]) * (1.0 - c * p[0]);
  const double oracle = std::sqrt(rss / pts.size());
  const double got = projection_residual(*t, [](const Point&) { return Vector::Ones(1); }, unit);
  CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(got == doctest::Approx(0.50).epsilon(0.01));

  // Empty field: residual is the RMS of g itself.
  CHECK(projection_residual(KLField::empty(1, 1), [](const Point&) { return Vector::Constant(1, 2.0); }, unit) ==
        doctest::Approx(2.0));
}

TEST_CASE("projection_residual refuses ill-conditioned spans") {
  const Box unit({0.0}, {1.0});
  // Duplicated basis function: Gram matrix is singular.
  const KLField dup(1, 1, {BasisFunction::monomial_1d(1), BasisFunction::monomial_1d(1, 2.0)});
  CHECK_THROWS_AS(projection_residual(dup, [](const Point& p) { return p; }, unit), IllConditioned);
}

TEST_CASE("empirical covariance converges to the kernel") {
  std::mt19937_64 rng(15);
  const auto f = grf::testing::random_field(rng, 1, 2, 4);
  const auto k = CovarianceKernel::from_field(f);
  const std::vector<std::pair<Point, Point>> pairs = {{pt(0.1), pt(0.8)}, {pt(0.5), pt(0.5)}, {pt(0.9), pt(0.2)}};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const std::size_t n = 100000;
    std::vector<Matrix> sum(pairs.size(), Matrix::Zero(2, 2)), sum_sq(pairs.size(), Matrix::Zero(2, 2));
    for (std::size_t i = 0; i < n; ++i) {
      const SamplePath s = sample(f, seed, i);
      for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const Matrix prod = s.eval(pairs[pi].first) * s.eval(pairs[pi].second).transpose();
        sum[pi] += prod;
        sum_sq[pi] += prod.cwiseProduct(prod);
      }
    }
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const Matrix mean = sum[pi] / n;
      const Matrix var = (sum_sq[pi] / n - mean.cwiseProduct(mean)) * (double(n) / (n - 1));
      const Matrix se = (var / n).cwiseSqrt();
      const Matrix exact = k.eval(pairs[pi].first, pairs[pi].second);
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) CHECK(std::abs(mean(j, l) - exact(j, l)) <= 5.0 * se(j, l));
    }
  }
}
