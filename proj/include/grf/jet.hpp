#pragma once

#include <cstddef>
#include <vector>

#include "grf/box.hpp"
#include "grf/field.hpp"
#include "grf/kernel.hpp"

namespace grf {

/// k · C(m + r, r), the dimension of the r-jet space at a point.
std::size_t jet_dimension(int m, int k, int r);

/// r-jet of a sample path at p. Entry (j, α) sits at j · C(m+r,r) + idx(α),
/// idx being the graded-lex position of α.
struct Jet {
  Point point;
  int order;
  Vector values;
};

Jet jet_eval(const SamplePath& s, const Point& p, int r);

/// Covariance of the r-jet at p: entry ((j,α),(l,β)) = ∂_(α,β) K^{j,l}(p,p).
struct JetCovariance {
  Point point;
  int order;
  Matrix matrix;
};

JetCovariance jet_covariance(const CovarianceKernel& kernel, const Point& p, int r);

inline constexpr double kDefaultRankTolerance = 1e-9;

/// Spectral rank certificate of the jet covariance. ratio = λ_min / λ_max
/// (0 when λ_max <= 0); nondegenerate iff ratio > rel_tol.
struct Certificate {
  Point point;
  double ratio;
  bool nondegenerate;
  std::size_t jet_dim;
  std::size_t rank_estimate;  ///< eigenvalues above rel_tol · λ_max
};

Certificate nondegeneracy_certificate(const CovarianceKernel& kernel, const Point& p, int r,
                                      double rel_tol = kDefaultRankTolerance);

struct ScanResult {
  bool all_pass;
  std::size_t worst_index;  ///< flat grid index of the minimum ratio
  Point worst_point;
  double worst_ratio;
  std::size_t points_checked;
  std::size_t points_failed;
};

/// Certificate at every grid point; the worst point is the smallest ratio,
/// ties going to the smallest grid index.
ScanResult scan_nondegeneracy(const CovarianceKernel& kernel, const Box& box, int r,
                              double rel_tol = kDefaultRankTolerance, int threads = 1);

}  // namespace grf
