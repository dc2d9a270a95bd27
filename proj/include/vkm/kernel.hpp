#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vkm/atom_space.hpp"
#include "vkm/types.hpp"

namespace vkm {

/// Absolute tolerance on entries of K(x,t) - K(t,x)^*.
inline constexpr double kDefaultTolSym = 1e-10;

/// A C^n-valued kernel: (x, t) -> n x n complex matrix.
///
/// Evaluation is a pure function of the two atoms. Copies share the underlying
/// evaluator, so the type is cheap to pass by value.
class MatrixKernel {
 public:
  using Evaluator = std::function<CMatrix(const AtomRef&, const AtomRef&)>;

  MatrixKernel() = default;
  MatrixKernel(Index n, Evaluator eval, std::string name = "custom");

  [[nodiscard]] Index n() const noexcept { return n_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  /// Evaluates K(x, t). Evaluator failures and wrongly sized results are rethrown
  /// as KernelError naming the offending pair.
  [[nodiscard]] CMatrix operator()(const AtomRef& x, const AtomRef& t) const;
  [[nodiscard]] CMatrix eval(const AtomSpace& space, Index x, Index t) const {
    return (*this)(space.atom(x), space.atom(t));
  }

 private:
  Index n_ = 0;
  Evaluator eval_;
  std::string name_;
};

/// Block Gram matrix over an ordered atom list; entry (x*n + l, t*n + j) is K(x,t)_{lj}.
struct BlockGram {
  std::vector<Index> atoms;  // indices into the AtomSpace
  Index n = 0;
  CMatrix G;

  [[nodiscard]] auto block(Index a, Index b) const { return G.block(a * n, b * n, n, n); }
};

/// Evaluates every block of the Gram matrix without any symmetrization.
[[nodiscard]] CMatrix raw_block_gram(const MatrixKernel& kernel, const AtomSpace& space,
                                     const std::vector<Index>& atoms);

/// Assembles the Hermitian block Gram matrix over `atoms` (all atoms when empty).
/// The result is (G + G^*)/2; throws KernelError if max|G - G^*| exceeds tol_sym.
[[nodiscard]] BlockGram assemble_block_gram(const MatrixKernel& kernel, const AtomSpace& space,
                                            std::vector<Index> atoms = {},
                                            double tol_sym = kDefaultTolSym);

struct ValidationReport {
  double max_hermitian_deviation = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double tol_sym = kDefaultTolSym;
  double tol_psd = 0.0;
  bool hermitian_ok = false;
  bool psd_ok = false;

  [[nodiscard]] bool passed() const noexcept { return hermitian_ok && psd_ok; }
};

/// tol_psd = 1e-10 * max(1, largest eigenvalue).
[[nodiscard]] double default_tol_psd(double max_eigenvalue);

/// Checks Hermitian pair symmetry and positive semidefiniteness of the block Gram
/// matrix over `atoms` (all atoms when empty). Never throws on a failing kernel.
[[nodiscard]] ValidationReport validate_kernel(const MatrixKernel& kernel, const AtomSpace& space,
                                               std::vector<Index> atoms = {},
                                               double tol_sym = kDefaultTolSym);

/// Largest absolute eigenvalue of a Hermitian matrix. Throws ValidationError when
/// M is not Hermitian within tol_sym.
[[nodiscard]] double spectral_norm(const CMatrix& M, double tol_sym = kDefaultTolSym);

[[nodiscard]] double max_hermitian_deviation(const CMatrix& M);

}  // namespace vkm
