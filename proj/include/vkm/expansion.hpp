#pragma once

#include <cstdint>
#include <vector>

#include "vkm/integral_operator.hpp"
#include "vkm/measure_space.hpp"
#include "vkm/rkhs.hpp"

namespace vkm {

/// 1e-8 * (1 + max_{x,l} |K(x,x)_{ll}|).
[[nodiscard]] double default_tol_recon(const AtomSpace& space, const MatrixKernel& kernel);

/// Truncated Mercer series: the first m terms of a spectral decomposition.
/// Non-owning; the decomposition must outlive the expansion.
class MercerExpansion {
 public:
  /// Throws ValidationError unless 0 <= m <= dec.rank().
  MercerExpansion(const SpectralDecomposition& dec, Index m);

  [[nodiscard]] const SpectralDecomposition& decomposition() const noexcept { return *dec_; }
  [[nodiscard]] Index terms() const noexcept { return m_; }

 private:
  const SpectralDecomposition* dec_;
  Index m_;
};

/// K_m(x,t)_{lj} = sum_{i<m} sigma_i f_i^l(x) conj(f_i^j(t)).
[[nodiscard]] CMatrix reconstruct(const MercerExpansion& expansion, Index x, Index t);

/// Truncation error over subset x subset, one row per requested m.
struct ErrorTable {
  std::vector<Index> m;
  std::vector<double> max_abs_error;   // over all pairs and entries
  std::vector<double> max_diag_error;  // over x = t and l = j only
};

/// Evaluates E(m) = max |K(x,t)_{lj} - K_m(x,t)_{lj}| for every m in `truncations`
/// (all of 0..rank when empty). Values in `truncations` above the rank are clamped.
[[nodiscard]] ErrorTable reconstruction_error(const SpectralDecomposition& dec,
                                              const MatrixKernel& kernel, const AtomSpace& space,
                                              const std::vector<Index>& subset,
                                              std::vector<Index> truncations = {});

/// Pointwise value h(t) of an element in either form.
[[nodiscard]] CVector evaluate(const RKHSElement& h, const SpectralDecomposition& dec,
                               const MatrixKernel& kernel, const AtomSpace& space, Index t);

/// Spectral coefficients of a section element: for K_x^j, c_i = sqrt(sigma_i) conj(f_i^j(x)).
/// Throws ValidationError if a section sits outside the support.
[[nodiscard]] RKHSElement project(const RKHSElement& sections, const SpectralDecomposition& dec,
                                  const SupportSet& support);

/// <h1, h2>_K, linear in the first argument. Two section elements use the Gram
/// evaluation sum <K(t,x) y_x, y'_t>; two spectral elements use sum c_i conj(c'_i);
/// mixed forms project the section element first.
[[nodiscard]] cplx rkhs_inner(const RKHSElement& h1, const RKHSElement& h2,
                              const SpectralDecomposition& dec, const MatrixKernel& kernel,
                              const AtomSpace& space, const SupportSet& support);

/// Scalar frame {sqrt(sigma_i) f_i^j} of the j-th diagonal block.
struct ScalarFrame {
  Index j = 0;
  CMatrix vectors;  // row x (atom), column i

  [[nodiscard]] Index size() const noexcept { return vectors.cols(); }
};

/// Throws ValidationError unless 0 <= j < n.
[[nodiscard]] ScalarFrame extract_frame(const SpectralDecomposition& dec, Index j);

/// max_x |K(x,x)_{jj} - sum_i |phi_i(x)|^2| over support atoms, i.e. the Parseval identity
/// tested on the sections (K_j)_x.
[[nodiscard]] double frame_check(const ScalarFrame& frame, const MatrixKernel& kernel,
                                 const AtomSpace& space, const SupportSet& support);

/// Parseval identity on `count` random combinations h = sum_r a_r (K_j)_{x_r} of
/// 1..3 support sections: | |h|^2_{K_j} - sum_i |<h, phi_i>|^2 |, maximized.
[[nodiscard]] double frame_check_combinations(const ScalarFrame& frame, const MatrixKernel& kernel,
                                              const AtomSpace& space, const SupportSet& support,
                                              int count, std::uint64_t seed);

}  // namespace vkm
