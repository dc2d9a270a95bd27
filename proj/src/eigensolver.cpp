#include "vkm/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace vkm {

namespace {

HermitianEigen sorted_descending(const RVector& values, const CMatrix& vectors, int sweeps) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(vectors.rows(), n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = values(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweeps;
  return out;
}

}  // namespace

HermitianEigen jacobi_eigen(const CMatrix& input, int max_sweeps, double tol) {
  const Index n = input.rows();
  if (input.cols() != n) throw ValidationError("jacobi_eigen: matrix is not square");
  // Work on the Hermitian matrix defined by the lower triangle.
  CMatrix A = input.selfadjointView<Eigen::Lower>();
  CMatrix V = CMatrix::Identity(n, n);
  for (Index k = 0; k < n; ++k) A(k, k) = A(k, k).real();

  const double frob = A.norm();
  const double floor = std::max(1e-300, 1e-18 * frob);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    Index rotations = 0;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const cplx apq = A(p, q);
        const double b = std::abs(apq);
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        if (b <= floor || b <= tol * std::sqrt(std::abs(app) * std::abs(aqq))) continue;
        ++rotations;

        const cplx e = apq / b;
        const double theta = (aqq - app) / (2.0 * b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx ce = std::conj(e);

        // A <- A R, V <- V R with R = [[c, s], [-s conj(e), c conj(e)]] on (p, q).
        for (Index k = 0; k < n; ++k) {
          const cplx akp = A(k, p);
          const cplx akq = A(k, q);
          A(k, p) = c * akp - s * ce * akq;
          A(k, q) = s * akp + c * ce * akq;
          const cplx vkp = V(k, p);
          const cplx vkq = V(k, q);
          V(k, p) = c * vkp - s * ce * vkq;
          V(k, q) = s * vkp + c * ce * vkq;
        }
        // A <- R^* A.
        for (Index k = 0; k < n; ++k) {
          const cplx apk = A(p, k);
          const cplx aqk = A(q, k);
          A(p, k) = c * apk - s * e * aqk;
          A(q, k) = s * apk + c * e * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = app - t * b;
        A(q, q) = aqq + t * b;
      }
    }
    if (rotations == 0) break;
  }
  if (sweep == max_sweeps) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < n; ++q)
        if (p != q) off += std::norm(A(p, q));
    throw ConvergenceError("Jacobi eigensolver did not converge after " + std::to_string(max_sweeps) +
                           " sweeps (n = " + std::to_string(n) + ", off-diagonal norm " +
                           std::to_string(std::sqrt(off)) + ", |A|_F " + std::to_string(frob) + ")");
  }
  return sorted_descending(A.diagonal().real(), V, sweep + 1);
}

HermitianEigen hermitian_eigen(const CMatrix& A, EigenSolverKind kind) {
  if (A.rows() != A.cols()) throw ValidationError("hermitian_eigen: matrix is not square");
  if (A.rows() == 0) return {};
  if (kind == EigenSolverKind::Jacobi) return jacobi_eigen(A);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(A, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("tridiagonal QL eigensolver did not converge (n = " +
                           std::to_string(A.rows()) + ")");
  }
  return sorted_descending(solver.eigenvalues(), solver.eigenvectors(), 0);
}

RVector hermitian_eigenvalues(const CMatrix& A) {
  if (A.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalue computation did not converge (n = " + std::to_string(A.rows()) +
                           ")");
  }
  return solver.eigenvalues().reverse();
}

}  // namespace vkm
