#include "grf/jet.hpp"

#include <limits>
#include <stdexcept>

#include "grf/linalg.hpp"
#include "grf/parallel.hpp"

namespace grf {

std::size_t jet_dimension(int m, int k, int r) {
  if (m < 1 || k < 1 || r < 0) throw std::invalid_argument("jet_dimension needs m >= 1, k >= 1, r >= 0");
  return static_cast<std::size_t>(k) * binomial(m + r, r);
}

Jet jet_eval(const SamplePath& s, const Point& p, int r) {
  const int m = s.field().m(), k = s.field().k();
  const auto idx = multi_indices_up_to(m, r);
  const auto block = static_cast<Eigen::Index>(idx.size());
  Vector values(k * block);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const Vector v = s.eval(p, idx[a]);
    for (int j = 0; j < k; ++j) values[j * block + static_cast<Eigen::Index>(a)] = v[j];
  }
  return Jet{p, r, std::move(values)};
}

JetCovariance jet_covariance(const CovarianceKernel& kernel, const Point& p, int r) {
  const int k = kernel.k();
  const auto idx = multi_indices_up_to(kernel.m(), r);
  const auto block = static_cast<Eigen::Index>(idx.size());
  Matrix c(k * block, k * block);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const Matrix d = kernel.eval_deriv(p, p, idx[a], idx[b]);
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
          c(j * block + static_cast<Eigen::Index>(a), l * block + static_cast<Eigen::Index>(b)) = d(j, l);
    }
  }
  return JetCovariance{p, r, std::move(c)};
}

Certificate nondegeneracy_certificate(const CovarianceKernel& kernel, const Point& p, int r, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("rel_tol must lie in (0, 1)");
  const JetCovariance jc = jet_covariance(kernel, p, r);
  const Vector eig = jacobi_eigen(jc.matrix).values;
  const double lmax = eig.maxCoeff();
  const double ratio = lmax > 0.0 ? eig.minCoeff() / lmax : 0.0;
  std::size_t rank = 0;
  if (lmax > 0.0)
    for (double e : eig) rank += e > rel_tol * lmax ? 1 : 0;
  return Certificate{p, ratio, ratio > rel_tol, static_cast<std::size_t>(jc.matrix.rows()), rank};
}

ScanResult scan_nondegeneracy(const CovarianceKernel& kernel, const Box& box, int r, double rel_tol, int threads) {
  const std::size_t n = box.num_points();
  std::vector<double> ratios(n);
  std::vector<char> pass(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t i = begin; i < end; ++i) {
      const Certificate c = nondegeneracy_certificate(kernel, box.point(i), r, rel_tol);
      ratios[i] = c.ratio;
      pass[i] = c.nondegenerate;
    }
  });
  ScanResult out{true, 0, box.point(0), std::numeric_limits<double>::infinity(), n, 0};
  for (std::size_t i = 0; i < n; ++i) {
    if (!pass[i]) {
      out.all_pass = false;
      ++out.points_failed;
    }
    if (ratios[i] < out.worst_ratio) {
      out.worst_ratio = ratios[i];
      out.worst_index = i;
    }
  }
  out.worst_point = box.point(out.worst_index);
  return out;
}

}  // namespace grf
