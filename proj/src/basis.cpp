#include "grf/basis.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "grf/errors.hpp"

namespace grf {

namespace {

// Writing h(s) = exp(1 − 1/(1 − s)) and u = 1/(1 − s), every derivative is
// h^{(k)}(s) = P_k(u) h(s) with P_0 = 1 and P_{k+1}(u) = u² (P_k'(u) − P_k(u)),
// because du/ds = u². P_k has degree 2k.
using Poly = std::array<double, 2 * kMaxBumpOrder + 1>;

std::array<Poly, kMaxBumpOrder + 1> make_profile_polys() {
  std::array<Poly, kMaxBumpOrder + 1> polys{};
  polys[0][0] = 1.0;
  for (int k = 0; k < kMaxBumpOrder; ++k) {
    const Poly& cur = polys[k];
    Poly& next = polys[k + 1];
    for (int d = 0; d <= 2 * k; ++d) {
      if (cur[d] == 0.0) continue;
      if (d > 0) next[d + 1] += d * cur[d];  // u² · d·u^{d−1}
      next[d + 2] -= cur[d];                  // −u² · u^d
    }
  }
  return polys;
}

const std::array<Poly, kMaxBumpOrder + 1>& profile_polys() {
  static const auto polys = make_profile_polys();
  return polys;
}

double eval_poly(const Poly& poly, int degree, double u) {
  double acc = 0.0;
  for (int d = degree; d >= 0; --d) acc = acc * u + poly[d];
  return acc;
}

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

double factorial(int n) { return falling_factorial(n, n); }

double monomial_partial(const Monomial& f, const Point& p, const MultiIndex& alpha) {
  double r = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    const int e = f.exponents[i];
    const int a = alpha[i];
    if (a > e) return 0.0;
    r *= falling_factorial(e, a) * std::pow(p[i], e - a);
  }
  return r;
}

double harmonic_partial(const Harmonic& f, const Point& p, const MultiIndex& alpha) {
  const double theta = f.frequency.dot(p) + f.phase;
  double scale = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) scale *= std::pow(f.frequency[i], alpha[i]);
  switch (alpha.order() % 4) {
    case 0: return scale * std::cos(theta);
    case 1: return -scale * std::sin(theta);
    case 2: return -scale * std::cos(theta);
    default: return scale * std::sin(theta);
  }
}

// Per-axis contributions of the composite h(s(y)), s = Σ y_i²: the Taylor
// coefficient of δ_i^{a} in (2 y_i δ_i + δ_i²)^{k} is C(k, a − k) (2 y_i)^{2k − a}
// for ceil(a/2) <= k <= a. Summing over (k_1..k_m) with K = Σ k_i gives
//   ∂_α h = α! Σ h^{(K)}(s) Π_i C(k_i, a_i − k_i) (2 y_i)^{2k_i − a_i} / k_i!.
void bump_accumulate(const Point& y, const MultiIndex& alpha, int axis, int total_k,
                     double weight, const std::array<double, kMaxBumpOrder + 1>& hk,
                     double& acc) {
  if (axis == alpha.dim()) {
    acc += weight * hk[total_k];
    return;
  }
  const int a = alpha[axis];
  for (int k = (a + 1) / 2; k <= a; ++k) {
    const double coeff = static_cast<double>(binomial(k, a - k)) *
                         std::pow(2.0 * y[axis], 2 * k - a) / factorial(k);
    bump_accumulate(y, alpha, axis + 1, total_k + k, weight * coeff, hk, acc);
  }
}

double bump_partial(const Bump& f, const Point& p, const MultiIndex& alpha) {
  if (alpha.order() > kMaxBumpOrder) throw OrderUnsupported(alpha.order(), kMaxBumpOrder);
  const Point y = (p - f.center) / f.radius;
  const double s = y.squaredNorm();
  if (s >= 1.0) return 0.0;
  const double u = 1.0 / (1.0 - s);
  // exp(1 − u) underflows long before P_k(u) can overflow past this point.
  if (u > 1e3) return 0.0;
  const double h = std::exp(1.0 - u);
  std::array<double, kMaxBumpOrder + 1> hk{};
  const auto& polys = profile_polys();
  for (int k = 0; k <= alpha.order(); ++k) hk[k] = eval_poly(polys[k], 2 * k, u) * h;
  double acc = 0.0;
  bump_accumulate(y, alpha, 0, 0, 1.0, hk, acc);
  return alpha.factorial() * acc / std::pow(f.radius, alpha.order());
}

int input_dim_of(const BasisFunction::Variant& v) {
  return std::visit(
      [](const auto& f) -> int {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Monomial>) return f.exponents.dim();
        else if constexpr (std::is_same_v<T, Harmonic>) return static_cast<int>(f.frequency.size());
        else if constexpr (std::is_same_v<T, Bump>) return static_cast<int>(f.center.size());
        else return f.inner->input_dim();
      },
      v);
}

}  // namespace

BasisFunction::BasisFunction(Variant v) : v_(std::move(v)) {
  if (const auto* s = std::get_if<Scaled>(&v_); s && !s->inner)
    throw std::invalid_argument("scaled basis function needs an inner function");
  if (const auto* b = std::get_if<Bump>(&v_); b && !(b->radius > 0.0))
    throw std::invalid_argument("bump radius must be positive");
  input_dim_ = input_dim_of(v_);
  if (input_dim_ < 1) throw std::invalid_argument("basis function input dimension must be positive");
  if (amplitude().size() < 1) throw std::invalid_argument("amplitude must be non-empty");
}

BasisFunction BasisFunction::monomial(MultiIndex exponents, Vector amplitude) {
  return BasisFunction(Monomial{std::move(exponents), std::move(amplitude)});
}

BasisFunction BasisFunction::harmonic(Vector frequency, double phase, Vector amplitude) {
  return BasisFunction(Harmonic{std::move(frequency), phase, std::move(amplitude)});
}

BasisFunction BasisFunction::bump(Vector center, double radius, Vector amplitude) {
  return BasisFunction(Bump{std::move(center), radius, std::move(amplitude)});
}

BasisFunction BasisFunction::scaled(BasisFunction inner, double factor) {
  return BasisFunction(Scaled{std::make_shared<const BasisFunction>(std::move(inner)), factor});
}

BasisFunction BasisFunction::monomial_1d(int power, double amplitude) {
  return monomial(MultiIndex{power}, Vector::Constant(1, amplitude));
}

BasisFunction BasisFunction::harmonic_1d(double frequency, double phase, double amplitude) {
  return harmonic(Vector::Constant(1, frequency), phase, Vector::Constant(1, amplitude));
}

BasisFunction BasisFunction::bump_1d(double center, double radius, double amplitude) {
  return bump(Vector::Constant(1, center), radius, Vector::Constant(1, amplitude));
}

const Vector& BasisFunction::amplitude() const {
  return std::visit(
      [](const auto& f) -> const Vector& {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Scaled>) return f.inner->amplitude();
        else return f.amplitude;
      },
      v_);
}

double BasisFunction::profile_partial(const Point& p, const MultiIndex& alpha) const {
  if (p.size() != input_dim_ || alpha.dim() != input_dim_)
    throw std::invalid_argument("point / multi-index dimension does not match basis function");
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Monomial>) return monomial_partial(f, p, alpha);
        else if constexpr (std::is_same_v<T, Harmonic>) return harmonic_partial(f, p, alpha);
        else if constexpr (std::is_same_v<T, Bump>) return bump_partial(f, p, alpha);
        else return f.factor * f.inner->profile_partial(p, alpha);
      },
      v_);
}

Vector BasisFunction::eval(const Point& p) const {
  return eval_partial(p, MultiIndex::zero(input_dim_));
}

Vector BasisFunction::eval_partial(const Point& p, const MultiIndex& alpha) const {
  return profile_partial(p, alpha) * amplitude();
}

bool BasisFunction::vanishes_near(const Point& p) const {
  return std::visit(
      [&](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Bump>) return ((p - f.center) / f.radius).squaredNorm() >= 1.0;
        else if constexpr (std::is_same_v<T, Scaled>) return f.factor == 0.0 || f.inner->vanishes_near(p);
        else return false;
      },
      v_);
}

std::optional<std::pair<Vector, Vector>> BasisFunction::support_bounds() const {
  return std::visit(
      [](const auto& f) -> std::optional<std::pair<Vector, Vector>> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Bump>) {
          const Vector r = Vector::Constant(f.center.size(), f.radius);
          return std::make_pair(Vector(f.center - r), Vector(f.center + r));
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return f.inner->support_bounds();
        } else {
          return std::nullopt;
        }
      },
      v_);
}

double fd_check(const BasisFunction& f, const Point& p, const MultiIndex& alpha, double h) {
  if (alpha.order() == 0) return 0.0;
  int axis = 0;
  while (alpha[axis] == 0) ++axis;
  const MultiIndex lower = alpha.lowered(axis);
  Point plus = p, minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  const Vector fd = (f.eval_partial(plus, lower) - f.eval_partial(minus, lower)) / (2.0 * h);
  const Vector analytic = f.eval_partial(p, alpha);
  return (analytic - fd).cwiseAbs().maxCoeff() / (1.0 + analytic.cwiseAbs().maxCoeff());
}

}  // namespace grf
