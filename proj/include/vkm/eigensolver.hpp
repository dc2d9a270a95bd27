#pragma once

#include "vkm/types.hpp"

namespace vkm {

enum class EigenSolverKind {
  Tridiagonal,  // Householder tridiagonalization + implicit QL (Eigen)
  Jacobi,       // cyclic complex Jacobi rotations
};

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;  // column k belongs to values(k)
  int sweeps = 0;   // Jacobi only
};

/// Full eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
/// Throws ConvergenceError on failure.
[[nodiscard]] HermitianEigen hermitian_eigen(const CMatrix& A,
                                             EigenSolverKind kind = EigenSolverKind::Tridiagonal);

/// Cyclic Jacobi. A rotation at (p, q) is skipped when |a_pq| <= tol * sqrt(|a_pp a_qq|)
/// or |a_pq| <= 1e-18 |A|_F; converged after a sweep without rotations.
[[nodiscard]] HermitianEigen jacobi_eigen(const CMatrix& A, int max_sweeps = 60,
                                          double tol = 2.220446049250313e-16);

/// Eigenvalues only, descending.
[[nodiscard]] RVector hermitian_eigenvalues(const CMatrix& A);

}  // namespace vkm
