#pragma once

#include "grf/types.hpp"

namespace grf {

/// Eigen-decomposition of a real symmetric matrix.
struct SymmetricEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< column i belongs to values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Iterates until the
/// off-diagonal Frobenius mass drops below `rel_tol` · ‖A‖_F (or `max_sweeps`).
/// Only the upper triangle of `a` is trusted; it is symmetrized first.
SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-12, int max_sweeps = 100);

/// Frobenius norm of the strictly off-diagonal part.
double off_diagonal_norm(const Matrix& a);

}  // namespace grf
