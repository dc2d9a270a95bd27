#pragma once

#include <vector>

#include "vkm/atom_space.hpp"
#include "vkm/eigensolver.hpp"
#include "vkm/kernel.hpp"
#include "vkm/measure_space.hpp"
#include "vkm/rkhs.hpp"

namespace vkm {

/// nu_x = mu_x / (1 + |K(x,x)|), plus the finite trace M = sum_x tr K(x,x) nu_x.
struct RescaledMeasure {
  RVector nu;
  double m_nu = 0.0;

  [[nodiscard]] Index size() const noexcept { return nu.size(); }
  [[nodiscard]] std::vector<Index> positive_atoms() const;
};

[[nodiscard]] RescaledMeasure rescale_measure(const AtomSpace& space, const MatrixKernel& kernel);

/// Symmetrized matrix of the integral operator over the positive-nu atoms:
/// A = D^{1/2} G D^{1/2}, D = diag(nu) with each weight repeated n times.
/// A is similar to the matrix G D of (L_nu f)(x) = sum_t K(x,t) f(t) nu_t.
struct DiscreteOperator {
  std::vector<Index> atoms;
  Index n = 0;
  RVector d;  // length atoms.size() * n
  CMatrix A;
};

/// Throws DegenerateInput when every nu weight is zero.
[[nodiscard]] DiscreteOperator assemble_operator(const AtomSpace& space, const MatrixKernel& kernel,
                                                 const RescaledMeasure& nu,
                                                 double tol_sym = kDefaultTolSym);

struct EigenOptions {
  /// Eigenvalues <= rank_cutoff_rel * sigma_1 are dropped.
  double rank_cutoff_rel = 1e-12;
  EigenSolverKind solver = EigenSolverKind::Tridiagonal;
};

/// Eigenvalues sigma_i > 0 of L_nu and eigenfunctions f_i, orthonormal in L^2(nu),
/// evaluated at every atom of the space.
struct SpectralDecomposition {
  Index n = 0;
  Index num_atoms = 0;
  std::vector<Index> operator_atoms;  // atoms carrying positive nu
  std::vector<bool> on_operator;      // per atom
  RVector spectrum;                   // every eigenvalue of A, descending
  RVector sigmas;                     // retained eigenvalues, descending
  CMatrix values;                     // row x*n + l, column i: f_i^l(x)
  double rank_cutoff = 0.0;

  [[nodiscard]] Index rank() const noexcept { return sigmas.size(); }
  [[nodiscard]] double sigma_max() const { return sigmas.size() > 0 ? sigmas(0) : 0.0; }
  [[nodiscard]] CVector value(Index i, Index x) const { return values.col(i).segment(x * n, n); }
  [[nodiscard]] cplx value(Index i, Index x, Index l) const { return values(x * n + l, i); }
  /// Rows of `values` belonging to atom x (n x rank).
  [[nodiscard]] auto block(Index x) const { return values.middleRows(x * n, n); }
};

/// tol_eig = 1e-9 * max(1, sigma_1).
[[nodiscard]] double default_tol_eig(const SpectralDecomposition& dec);

/// Eigendecomposition of `op`. Eigenvectors u_i map to f_i = D^{-1/2} u_i on operator atoms,
/// with the first non-negligible entry of u_i made real positive; atoms with nu = 0 get
/// the continuous extension (see extend_eigenfunction).
[[nodiscard]] SpectralDecomposition eigendecompose(const DiscreteOperator& op,
                                                   const AtomSpace& space,
                                                   const MatrixKernel& kernel,
                                                   const RescaledMeasure& nu,
                                                   const EigenOptions& options = {});

/// Decomposes the operator of the quotient space (each class collapsed onto its
/// representative with the class mass) and lifts the eigenfunctions back, so that they
/// are exactly constant on classes. For exact duplicates this is the same operator
/// restricted to class-constant functions; the remaining eigenvalues are zero.
[[nodiscard]] SpectralDecomposition eigendecompose_quotient(const AtomSpace& space,
                                                            const MatrixKernel& kernel,
                                                            const Quotient& classes,
                                                            const EigenOptions& options = {},
                                                            double tol_sym = kDefaultTolSym);

/// f_i(x) = (1/sigma_i) sum_{t: nu_t > 0} K(x,t) f_i(t) nu_t, defined at any atom.
/// Throws ValidationError when sigma_i is below the rank cutoff or i is out of range.
[[nodiscard]] CVector extend_eigenfunction(const SpectralDecomposition& dec, const MatrixKernel& kernel,
                                           const AtomSpace& space, const RescaledMeasure& nu,
                                           Index i, Index x);

/// i_K^* f = sum_x K_x f(x) nu_x as a kernel-section element; `f` is stacked per atom
/// (length num_atoms * n) and only positive-nu atoms contribute.
[[nodiscard]] RKHSElement adjoint_embed(const CVector& f, const RescaledMeasure& nu, Index n);

/// Pointwise value of a kernel-section element: h(t) = sum_x K(t,x) y_x.
[[nodiscard]] CVector evaluate_sections(const RKHSElement& h, const MatrixKernel& kernel,
                                        const AtomSpace& space, Index t);

struct TraceCheck {
  double lhs = 0.0;  // sum of all eigenvalues
  double rhs = 0.0;  // sum_x tr K(x,x) nu_x

  [[nodiscard]] double residual() const { return std::abs(lhs - rhs); }
  [[nodiscard]] bool ok(double rel = 1e-10) const { return residual() <= rel * std::max(1.0, rhs); }
};

[[nodiscard]] TraceCheck trace_check(const SpectralDecomposition& dec, const AtomSpace& space,
                                     const MatrixKernel& kernel, const RescaledMeasure& nu);

struct EmbeddingBound {
  double l2_sq = 0.0;  // |i_K h|^2 in L^2(nu), by quadrature over the atoms
  double bound = 0.0;  // M_nu |h|_K^2

  [[nodiscard]] bool ok(double tol) const { return l2_sq <= bound + tol; }
};

/// `h` must be in spectral form.
[[nodiscard]] EmbeddingBound embedding_norm_bound_check(const RKHSElement& h,
                                                        const SpectralDecomposition& dec,
                                                        const RescaledMeasure& nu);

/// max_{x,l,i} |(L_nu f_i)(x)_l - sigma_i f_i(x)_l| over operator atoms.
[[nodiscard]] double eigen_residual(const SpectralDecomposition& dec, const AtomSpace& space,
                                    const MatrixKernel& kernel, const RescaledMeasure& nu);

/// max entry of |F^* D F - I| over operator atoms.
[[nodiscard]] double l2_orthonormality_error(const SpectralDecomposition& dec,
                                             const RescaledMeasure& nu);

}  // namespace vkm
