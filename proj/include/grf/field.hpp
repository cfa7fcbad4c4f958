#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "grf/basis.hpp"
#include "grf/box.hpp"
#include "grf/random.hpp"

namespace grf {

/// Finite Karhunen–Loève field X = Σ_n σ_n ξ_n f_n with ξ_n i.i.d. N(0,1).
class KLField {
 public:
  /// `sigmas` defaults to all ones when empty.
  KLField(int m, int k, std::vector<BasisFunction> basis, std::vector<double> sigmas = {});

  static KLField empty(int m, int k) { return KLField(m, k, {}); }

  int m() const { return m_; }
  int k() const { return k_; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<BasisFunction>& basis() const { return basis_; }
  const std::vector<double>& sigmas() const { return sigmas_; }

  std::vector<const BasisFunction*> basis_pointers() const;

 private:
  int m_;
  int k_;
  std::vector<BasisFunction> basis_;
  std::vector<double> sigmas_;
};

using FieldPtr = std::shared_ptr<const KLField>;

inline FieldPtr make_field(KLField field) { return std::make_shared<const KLField>(std::move(field)); }

/// One realization: the function Σ_n coeffs_n f_n, where coeffs_n = σ_n ξ_n.
class SamplePath {
 public:
  SamplePath(FieldPtr field, Vector coeffs);

  const KLField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const Vector& coeffs() const { return coeffs_; }

  Vector eval(const Point& p) const;
  Vector eval(const Point& p, const MultiIndex& alpha) const;

  /// Coefficientwise sum; both paths must share the field.
  friend SamplePath operator+(const SamplePath& a, const SamplePath& b);

 private:
  FieldPtr field_;
  Vector coeffs_;
};

/// Draws N standard normals from `rng` in basis order.
SamplePath sample(const FieldPtr& field, RandomStream& rng);
/// Sample number `index` of the run seeded with `seed`.
SamplePath sample(const FieldPtr& field, std::uint64_t seed, std::uint64_t index);

/// Grid approximation of ‖s‖_{box,r}: max over grid points, |α| <= r and
/// output components of |∂_α s^j|.
double sample_seminorm(const SamplePath& s, const Box& box, int r);

/// h_p^j(q) = column j of K(q, p), as an element of span{f_n} with
/// coefficients σ_n² f_n^j(p).
struct SupportBasisFunction {
  Point source;
  int component;
  SamplePath function;
};

/// `component` is zero-based.
SupportBasisFunction support_basis(const FieldPtr& field, const Point& p, int component);

/// Cameron–Martin inner product ⟨h_p^j, h_q^l⟩ = Σ σ_n² f_n^j(p) f_n^l(q).
/// Cross-checked against the kernel entry K^{j,l}(p,q); a disagreement beyond
/// 1e-12 (relative to 1 + |K|) throws std::logic_error.
double cm_inner(const FieldPtr& field, const Point& p, int j, const Point& q, int l);

using GridFunction = std::function<Vector(const Point&)>;

/// Root-mean-square residual, over the grid of `box` and all output
/// components, of the least-squares projection of g onto span{f_n}.
/// Throws IllConditioned when the (column-equilibrated) Gram matrix has
/// condition estimate above 1e12.
double projection_residual(const KLField& field, const GridFunction& g, const Box& box);
double projection_residual(const KLField& field, const SamplePath& g, const Box& box);

/// Condition limit used by projection_residual.
inline constexpr double kMaxGramCondition = 1e12;

}  // namespace grf
