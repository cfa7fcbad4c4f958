#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <variant>

#include "grf/multi_index.hpp"
#include "grf/types.hpp"

namespace grf {

class BasisFunction;

/// amplitude · Π x_i^{e_i}
struct Monomial {
  MultiIndex exponents;
  Vector amplitude;
};

/// amplitude · cos(⟨ω, x⟩ + φ), ω in radians per unit length.
struct Harmonic {
  Vector frequency;
  double phase = 0.0;
  Vector amplitude;
};

/// amplitude · exp(1 − 1/(1 − |(x − c)/ρ|²)) inside the open ball of radius ρ
/// around c, and 0 outside. Peak value |amplitude| at the center.
struct Bump {
  Vector center;
  double radius = 1.0;
  Vector amplitude;
};

/// factor · inner
struct Scaled {
  std::shared_ptr<const BasisFunction> inner;
  double factor = 1.0;
};

/// Highest derivative order implemented for Bump.
inline constexpr int kMaxBumpOrder = 4;

/// Closed-form smooth map R^m → R^k with exact partial derivatives.
///
/// Every family factors as amplitude · (scalar profile), so derivatives are
/// computed on the scalar profile and scaled by the amplitude vector.
class BasisFunction {
 public:
  using Variant = std::variant<Monomial, Harmonic, Bump, Scaled>;

  BasisFunction(Variant v);

  static BasisFunction monomial(MultiIndex exponents, Vector amplitude);
  static BasisFunction harmonic(Vector frequency, double phase, Vector amplitude);
  static BasisFunction bump(Vector center, double radius, Vector amplitude);
  static BasisFunction scaled(BasisFunction inner, double factor);

  /// Scalar shorthands, m = k = 1.
  static BasisFunction monomial_1d(int power, double amplitude = 1.0);
  static BasisFunction harmonic_1d(double frequency, double phase = 0.0, double amplitude = 1.0);
  static BasisFunction bump_1d(double center, double radius, double amplitude = 1.0);

  const Variant& variant() const { return v_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return static_cast<int>(amplitude().size()); }

  /// Amplitude vector shared by eval and every derivative.
  const Vector& amplitude() const;

  /// ∂_α of the scalar profile times any Scaled factors.
  double profile_partial(const Point& p, const MultiIndex& alpha) const;

  Vector eval(const Point& p) const;
  Vector eval_partial(const Point& p, const MultiIndex& alpha) const;

  /// True when the function is identically zero at p together with all
  /// derivatives (outside a bump's ball).
  bool vanishes_near(const Point& p) const;

  /// Axis-aligned bounding box (lower, upper) of the support, when compact.
  std::optional<std::pair<Vector, Vector>> support_bounds() const;

 private:
  Variant v_;
  int input_dim_ = 0;
};

/// Relative discrepancy between the analytic ∂_α f(p) and a central
/// difference of the analytic ∂_{α−e_i} f along the first axis i with
/// α_i > 0: |analytic − fd|_∞ / (1 + |analytic|_∞). Zero when |α| = 0.
double fd_check(const BasisFunction& f, const Point& p, const MultiIndex& alpha, double h);

}  // namespace grf
