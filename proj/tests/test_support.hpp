#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "grf/basis.hpp"
#include "grf/field.hpp"
#include "grf/normal.hpp"

namespace grf::testing {

inline Point pt(double x) { return Vector::Constant(1, x); }
inline Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

/// Quantile by bisection on Φ; independent of the Halley iteration.
inline double bisect_quantile(double u) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Random basis function on R^m → R^k drawn from monomials (degree <= 2 per
/// axis) and harmonics (|ω| <= 3); bumps included when `with_bumps`.
inline BasisFunction random_basis(std::mt19937_64& rng, int m, int k, bool with_bumps = false) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, with_bumps ? 2 : 1);
  std::uniform_int_distribution<int> deg(0, 2);
  Vector amp(k);
  for (int j = 0; j < k; ++j) amp[j] = unif(rng);
  switch (kind(rng)) {
    case 0: {
      std::vector<int> e(m);
      for (auto& x : e) x = deg(rng);
      return BasisFunction::monomial(MultiIndex(e), amp);
    }
    case 1: {
      Vector w(m);
      for (int i = 0; i < m; ++i) w[i] = 3.0 * unif(rng);
      return BasisFunction::harmonic(w, unif(rng), amp);
    }
    default: {
      Vector c(m);
      for (int i = 0; i < m; ++i) c[i] = 0.5 + 0.3 * unif(rng);
      return BasisFunction::bump(c, 0.4 + 0.2 * std::abs(unif(rng)), amp);
    }
  }
}

inline FieldPtr random_field(std::mt19937_64& rng, int m, int k, int n, bool with_bumps = false) {
  std::uniform_real_distribution<double> sig(0.5, 1.5);
  std::vector<BasisFunction> basis;
  std::vector<double> sigmas;
  for (int i = 0; i < n; ++i) {
    basis.push_back(random_basis(rng, m, k, with_bumps));
    sigmas.push_back(sig(rng));
  }
  return make_field(KLField(m, k, std::move(basis), std::move(sigmas)));
}

inline Point random_point(std::mt19937_64& rng, int m, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Point p(m);
  for (int i = 0; i < m; ++i) p[i] = unif(rng);
  return p;
}

// P{|a| < 1, |a + b/d| < 1} for independent standard normals: the sup of
// a + (b/d)t over [0, 1] sits at an endpoint. Midpoint rule in b.
inline double sup_below_one_affine(double d) {
  const int n = 200000;
  const double lo = -12.0, h = 24.0 / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double b = lo + (i + 0.5) * h;
    const double hi_a = std::min(1.0, 1.0 - b / d), lo_a = std::max(-1.0, -1.0 - b / d);
    if (hi_a > lo_a) total += std::exp(-0.5 * b * b) * (normal_cdf(hi_a) - normal_cdf(lo_a));
  }
  return total * h / std::sqrt(2.0 * std::acos(-1.0));
}

}  // namespace grf::testing
