#include "grf/field.hpp"

#include <cmath>
#include <stdexcept>

#include "grf/errors.hpp"
#include "grf/feature_grid.hpp"
#include "grf/kernel.hpp"
#include "grf/linalg.hpp"

namespace grf {

KLField::KLField(int m, int k, std::vector<BasisFunction> basis, std::vector<double> sigmas)
    : m_(m), k_(k), basis_(std::move(basis)), sigmas_(std::move(sigmas)) {
  if (m_ < 1 || k_ < 1) throw std::invalid_argument("field dimensions must be positive");
  if (sigmas_.empty()) sigmas_.assign(basis_.size(), 1.0);
  if (sigmas_.size() != basis_.size()) throw std::invalid_argument("one sigma per basis function required");
  for (double s : sigmas_)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("sigmas must be positive and finite");
  for (const auto& f : basis_) {
    if (f.input_dim() != m_ || f.output_dim() != k_)
      throw std::invalid_argument("basis function dimensions do not match field (m, k)");
  }
}

std::vector<const BasisFunction*> KLField::basis_pointers() const {
  std::vector<const BasisFunction*> out;
  out.reserve(basis_.size());
  for (const auto& f : basis_) out.push_back(&f);
  return out;
}

SamplePath::SamplePath(FieldPtr field, Vector coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (!field_) throw std::invalid_argument("sample path needs a field");
  if (static_cast<std::size_t>(coeffs_.size()) != field_->size())
    throw std::invalid_argument("one coefficient per basis function required");
}

Vector SamplePath::eval(const Point& p) const { return eval(p, MultiIndex::zero(field_->m())); }

Vector SamplePath::eval(const Point& p, const MultiIndex& alpha) const {
  Vector out = Vector::Zero(field_->k());
  for (std::size_t n = 0; n < field_->size(); ++n) {
    if (coeffs_[n] == 0.0) continue;
    const BasisFunction& f = field_->basis()[n];
    out += coeffs_[n] * f.profile_partial(p, alpha) * f.amplitude();
  }
  return out;
}

SamplePath operator+(const SamplePath& a, const SamplePath& b) {
  if (a.field_ != b.field_) throw std::invalid_argument("sample paths belong to different fields");
  return SamplePath(a.field_, a.coeffs_ + b.coeffs_);
}

SamplePath sample(const FieldPtr& field, RandomStream& rng) {
  Vector c(field->size());
  for (std::size_t n = 0; n < field->size(); ++n) c[n] = field->sigmas()[n] * rng.normal();
  return SamplePath(field, std::move(c));
}

SamplePath sample(const FieldPtr& field, std::uint64_t seed, std::uint64_t index) {
  RandomStream rng(seed, index);
  return sample(field, rng);
}

double sample_seminorm(const SamplePath& s, const Box& box, int r) {
  const FeatureGrid grid(s.field().basis_pointers(), box, r);
  std::vector<double> buf(s.field().k());
  std::span<const double> coeffs(s.coeffs().data(), s.coeffs().size());
  double sup = 0.0;
  for (std::size_t a = 0; a < grid.indices().size(); ++a) {
    for (std::size_t g = 0; g < grid.num_points(); ++g) {
      grid.combine(a, g, coeffs, buf);
      for (double v : buf) sup = std::max(sup, std::abs(v));
    }
  }
  return sup;
}

SupportBasisFunction support_basis(const FieldPtr& field, const Point& p, int component) {
  if (component < 0 || component >= field->k()) throw std::out_of_range("component out of range");
  Vector c(field->size());
  for (std::size_t n = 0; n < field->size(); ++n) {
    const double sigma = field->sigmas()[n];
    c[n] = sigma * sigma * field->basis()[n].eval(p)[component];
  }
  return SupportBasisFunction{p, component, SamplePath(field, std::move(c))};
}

double cm_inner(const FieldPtr& field, const Point& p, int j, const Point& q, int l) {
  if (j < 0 || j >= field->k() || l < 0 || l >= field->k()) throw std::out_of_range("component out of range");
  double sum = 0.0;
  for (std::size_t n = 0; n < field->size(); ++n) {
    const double sigma = field->sigmas()[n];
    const BasisFunction& f = field->basis()[n];
    sum += sigma * sigma * f.eval(p)[j] * f.eval(q)[l];
  }
  const double k_entry = CovarianceKernel::from_field(field).eval(p, q)(j, l);
  if (std::abs(sum - k_entry) > 1e-12 * (1.0 + std::abs(k_entry)))
    throw std::logic_error("Cameron-Martin inner product disagrees with kernel entry");
  return sum;
}

double projection_residual(const KLField& field, const GridFunction& g, const Box& box) {
  const std::vector<Point> pts = box.grid();
  const Eigen::Index rows = static_cast<Eigen::Index>(pts.size()) * field.k();
  const Eigen::Index cols = static_cast<Eigen::Index>(field.size());

  Vector target(rows);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vector v = g(pts[i]);
    if (v.size() != field.k()) throw std::invalid_argument("target output dimension differs from field");
    target.segment(static_cast<Eigen::Index>(i) * field.k(), field.k()) = v;
  }
  const double denom = std::sqrt(static_cast<double>(rows));
  if (cols == 0) return target.norm() / denom;

  Matrix design(rows, cols);
  for (Eigen::Index n = 0; n < cols; ++n)
    for (std::size_t i = 0; i < pts.size(); ++i)
      design.block(static_cast<Eigen::Index>(i) * field.k(), n, field.k(), 1) = field.basis()[n].eval(pts[i]);

  // Equilibrate columns so the condition estimate reflects the span rather
  // than the scale of individual basis functions.
  Vector scale(cols);
  for (Eigen::Index n = 0; n < cols; ++n) {
    const double norm = design.col(n).norm();
    scale[n] = norm > 0.0 ? 1.0 / norm : 0.0;
  }
  const Matrix a = design * scale.asDiagonal();
  const SymmetricEigen eig = jacobi_eigen(a.transpose() * a);
  const double lmax = eig.values.maxCoeff();
  const double lmin = eig.values.minCoeff();
  if (lmax <= 0.0) return target.norm() / denom;
  const double condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (condition > kMaxGramCondition) throw IllConditioned(condition);

  // Pseudo-inverse of the Gram matrix from its spectral decomposition.
  const double cutoff = lmax / kMaxGramCondition;
  Vector inv(cols);
  for (Eigen::Index i = 0; i < cols; ++i) inv[i] = eig.values[i] > cutoff ? 1.0 / eig.values[i] : 0.0;
  const Matrix gram_pinv = eig.vectors * inv.asDiagonal() * eig.vectors.transpose();

  Vector coef = gram_pinv * (a.transpose() * target);
  Vector residual = target - a * coef;
  // One step of iterative refinement recovers the accuracy the normal
  // equations lose to squaring the condition number.
  coef += gram_pinv * (a.transpose() * residual);
  residual = target - a * coef;
  return residual.norm() / denom;
}

double projection_residual(const KLField& field, const SamplePath& g, const Box& box) {
  return projection_residual(field, [&](const Point& p) { return g.eval(p); }, box);
}

}  // namespace grf
