#include "doctest.h"

#include "grf/jet.hpp"
#include "test_support.hpp"

using namespace grf;
using grf::testing::pt;

namespace {

FieldPtr poly_field(std::vector<std::pair<int, double>> terms) {
  std::vector<BasisFunction> basis;
  for (auto [power, amp] : terms) basis.push_back(BasisFunction::monomial_1d(power, amp));
  return make_field(KLField(1, 1, std::move(basis)));
}

const auto kDot = CovarianceKernel::closed_form(ClosedFormTag::Dot);
const auto kAffine = CovarianceKernel::closed_form(ClosedFormTag::AffineDot);

}  // namespace

TEST_CASE("jet_dimension") {
  CHECK(jet_dimension(1, 1, 1) == 2);
  CHECK(jet_dimension(2, 1, 1) == 3);
  CHECK(jet_dimension(1, 2, 2) == 6);
  CHECK(jet_dimension(3, 2, 2) == 20);
}

TEST_CASE("jet_eval") {
  const auto f = poly_field({{0, 1.0}, {1, 1.0}, {2, 1.0}});
  const SamplePath affine(f, (Vector(3) << 2.0, 3.0, 0.0).finished());
  const Jet j = jet_eval(affine, pt(0.0), 1);
  CHECK(j.values.size() == 2);
  CHECK(j.values[0] == 2.0);
  CHECK(j.values[1] == 3.0);
  CHECK(jet_eval(SamplePath(f, Vector::Zero(3)), pt(0.4), 2).values.isZero());
  const SamplePath square(f, (Vector(3) << 0.0, 0.0, 1.0).finished());
  const Jet sq = jet_eval(square, pt(1.0), 2);
  CHECK(sq.values[0] == 1.0);
  CHECK(sq.values[1] == 2.0);
  CHECK(sq.values[2] == 2.0);
}

TEST_CASE("jet layout is component-major then graded-lex") {
  // f(x,y) = (x, y²) ; r = 1 multi-indices (0,0), (0,1), (1,0).
  const auto f = make_field(KLField(2, 2, {BasisFunction::monomial(MultiIndex{1, 0}, (Vector(2) << 1, 0).finished()),
                                           BasisFunction::monomial(MultiIndex{0, 2}, (Vector(2) << 0, 1).finished())}));
  const Jet j = jet_eval(SamplePath(f, Vector::Ones(2)), pt(0.5, 3.0), 1);
  const Vector expected = (Vector(6) << 0.5, 0.0, 1.0, 9.0, 6.0, 0.0).finished();
  CHECK((j.values - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jet_covariance examples") {
  for (double p : {0.0, 0.3, 1.0, -2.0}) {
    const Matrix c = jet_covariance(kDot, pt(p), 1).matrix;
    CHECK(c(0, 0) == doctest::Approx(p * p));
    CHECK(c(0, 1) == doctest::Approx(p));
    CHECK(c(1, 0) == doctest::Approx(p));
    CHECK(c(1, 1) == doctest::Approx(1.0));
    const Matrix a = jet_covariance(kAffine, pt(p), 1).matrix;
    CHECK(a(0, 0) == doctest::Approx(1.0 + p * p));
    CHECK(a.determinant() == doctest::Approx(1.0));
  }
  CHECK(jet_covariance(CovarianceKernel::zero(1, 1), pt(0.5), 2).matrix.isZero());
}

TEST_CASE("FromKL jet covariance equals J J^T (brute-force oracle)") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 1 + trial % 2, k = 1 + trial % 3, r = 1 + trial % 2;
    const auto f = grf::testing::random_field(rng, m, k, 5, true);
    const Point p = grf::testing::random_point(rng, m);
    // Column n is the jet of σ_n f_n at p.
    const auto idx = multi_indices_up_to(m, r);
    const auto dim = static_cast<Eigen::Index>(jet_dimension(m, k, r));
    Matrix J(dim, static_cast<Eigen::Index>(f->size()));
    for (std::size_t n = 0; n < f->size(); ++n)
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const Vector v = f->sigmas()[n] * f->basis()[n].eval_partial(p, idx[a]);
        for (int j = 0; j < k; ++j) J(j * static_cast<Eigen::Index>(idx.size()) + a, n) = v[j];
      }
    const Matrix c = jet_covariance(CovarianceKernel::from_field(f), p, r).matrix;
    CHECK((c - J * J.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + c.cwiseAbs().maxCoeff()));
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("nondegeneracy_certificate examples") {
  for (double p : {0.0, 0.5, 1.0}) {
    CHECK(nondegeneracy_certificate(kAffine, pt(p), 1).nondegenerate);
    const auto c = nondegeneracy_certificate(kDot, pt(p), 1);
    CHECK_FALSE(c.nondegenerate);
    CHECK(c.ratio < 1e-9);
  }
  const auto kostlan = CovarianceKernel::from_field(poly_field({{0, 1.0}, {1, 1.0}, {2, 1.0 / std::sqrt(2.0)}}));
  const auto c = nondegeneracy_certificate(kostlan, pt(0.0), 1);
  CHECK(c.nondegenerate);
  CHECK(c.jet_dim == 2);
  CHECK(c.rank_estimate == 2);
  CHECK(c.ratio == doctest::Approx(1.0));
}

TEST_CASE("rank bounded by the number of basis functions") {
  std::mt19937_64 rng(22);
  for (int n = 1; n <= 4; ++n) {
    const auto f = grf::testing::random_field(rng, 2, 1, n);
    const auto k = CovarianceKernel::from_field(f);
    const auto c = nondegeneracy_certificate(k, grf::testing::random_point(rng, 2), 2);
    CHECK(c.jet_dim == 6);
    CHECK(c.rank_estimate <= static_cast<std::size_t>(n));
    CHECK(c.ratio < 1e-9);
  }
}

TEST_CASE("verdict is invariant under kernel scaling") {
  const auto kostlan = CovarianceKernel::from_field(poly_field({{0, 1.0}, {1, 1.0}, {2, 1.0 / std::sqrt(2.0)}}));
  for (const auto* k : {&kAffine, &kDot, &kostlan}) {
    for (int r : {1, 2}) {
      const bool base = nondegeneracy_certificate(*k, pt(0.4), r).nondegenerate;
      for (double c : {1e-6, 1.0, 1e6}) CHECK(nondegeneracy_certificate(k->scaled(c), pt(0.4), r).nondegenerate == base);
    }
  }
}

TEST_CASE("scan_nondegeneracy examples") {
  const Box unit({0.0}, {1.0});
  const auto good = scan_nondegeneracy(kAffine, unit, 1);
  CHECK(good.all_pass);
  CHECK(good.points_checked == 257);
  // Smallest ratio at p = 1: eigenvalues (3 ± √5)/2.
  CHECK(good.worst_point[0] == 1.0);
  CHECK(good.worst_ratio == doctest::Approx((3.0 - std::sqrt(5.0)) / (3.0 + std::sqrt(5.0))));

  const auto bad = scan_nondegeneracy(kDot, unit, 1);
  CHECK_FALSE(bad.all_pass);
  CHECK(bad.points_failed == 257);

  const auto affine = CovarianceKernel::from_field(poly_field({{0, 1.0}, {1, 1.0}}));
  CHECK_FALSE(scan_nondegeneracy(affine, unit, 2).all_pass);
  CHECK(scan_nondegeneracy(affine, unit, 1).all_pass);

  // Threads do not change the verdict or the worst point.
  const auto threaded = scan_nondegeneracy(kAffine, unit, 1, kDefaultRankTolerance, 4);
  CHECK(threaded.worst_index == good.worst_index);
  CHECK(threaded.worst_ratio == good.worst_ratio);
}

TEST_CASE("sampled jets have the certified covariance") {
  const auto f = poly_field({{0, 1.0}, {1, 1.0}, {2, 1.0 / std::sqrt(2.0)}});
  const auto k = CovarianceKernel::from_field(f);
  const Point p = pt(0.6);
  REQUIRE(nondegeneracy_certificate(k, p, 2).nondegenerate);
  const Matrix exact = jet_covariance(k, p, 2).matrix;
  const std::size_t n = 100000;
  Matrix sum = Matrix::Zero(3, 3), sum_sq = Matrix::Zero(3, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector j = jet_eval(sample(f, 5, i), p, 2).values;
    const Matrix prod = j * j.transpose();
    sum += prod;
    sum_sq += prod.cwiseProduct(prod);
  }
  const Matrix mean = sum / n;
  const Matrix se = ((sum_sq / n - mean.cwiseProduct(mean)) / (n - 1)).cwiseSqrt();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(mean(a, b) - exact(a, b)) <= 5.0 * se(a, b));
}
