#include "vkm/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace vkm {

double default_tol_recon(const AtomSpace& space, const MatrixKernel& kernel) {
  double max_diag = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    const CMatrix k = kernel.eval(space, x, x);
    for (Index l = 0; l < k.rows(); ++l) max_diag = std::max(max_diag, std::abs(k(l, l)));
  }
  return 1e-8 * (1.0 + max_diag);
}

MercerExpansion::MercerExpansion(const SpectralDecomposition& dec, Index m) : dec_(&dec), m_(m) {
  if (m < 0 || m > dec.rank()) {
    throw ValidationError("truncation m = " + std::to_string(m) + " outside [0, " +
                          std::to_string(dec.rank()) + "]");
  }
}

CMatrix reconstruct(const MercerExpansion& expansion, Index x, Index t) {
  const auto& dec = expansion.decomposition();
  const Index m = expansion.terms();
  if (m == 0) return CMatrix::Zero(dec.n, dec.n);
  const auto fx = dec.block(x).leftCols(m);
  const auto ft = dec.block(t).leftCols(m);
  return fx * dec.sigmas.head(m).cast<cplx>().asDiagonal() * ft.adjoint();
}

ErrorTable reconstruction_error(const SpectralDecomposition& dec, const MatrixKernel& kernel,
                                const AtomSpace& space, const std::vector<Index>& subset,
                                std::vector<Index> truncations) {
  const Index n = dec.n;
  if (truncations.empty()) {
    for (Index m = 0; m <= dec.rank(); ++m) truncations.push_back(m);
  }
  for (auto& m : truncations) {
    if (m < 0) throw ValidationError("truncation m must be >= 0");
    m = std::min(m, dec.rank());
  }
  std::sort(truncations.begin(), truncations.end());
  truncations.erase(std::unique(truncations.begin(), truncations.end()), truncations.end());

  const auto S = static_cast<Index>(subset.size());
  const CMatrix K = raw_block_gram(kernel, space, subset);
  CMatrix F(S * n, dec.rank());
  for (Index a = 0; a < S; ++a) F.middleRows(a * n, n) = dec.block(subset[static_cast<std::size_t>(a)]);

  ErrorTable table;
  CMatrix Khat = CMatrix::Zero(S * n, S * n);
  Index done = 0;
  for (Index m : truncations) {
    for (; done < m; ++done) Khat.noalias() += dec.sigmas(done) * F.col(done) * F.col(done).adjoint();
    const CMatrix R = K - Khat;
    table.m.push_back(m);
    table.max_abs_error.push_back(R.size() > 0 ? R.cwiseAbs().maxCoeff() : 0.0);
    table.max_diag_error.push_back(R.size() > 0 ? R.diagonal().cwiseAbs().maxCoeff() : 0.0);
  }
  return table;
}

CVector evaluate(const RKHSElement& h, const SpectralDecomposition& dec, const MatrixKernel& kernel,
                 const AtomSpace& space, Index t) {
  if (!h.is_spectral()) return evaluate_sections(h, kernel, space, t);
  const CVector& c = h.coefficients();
  if (c.size() != dec.rank()) throw ValidationError("spectral element does not match the decomposition rank");
  return dec.block(t) * c.cwiseProduct(dec.sigmas.cwiseSqrt().cast<cplx>());
}

RKHSElement project(const RKHSElement& sections, const SpectralDecomposition& dec,
                    const SupportSet& support) {
  CVector c = CVector::Zero(dec.rank());
  for (const auto& term : sections.terms()) {
    if (!support.contains(term.atom)) {
      throw ValidationError("element not representable in spectral basis: section at atom index " +
                            std::to_string(term.atom) + " lies outside the support");
    }
    if (term.y.size() != dec.n) throw ValidationError("section coefficient has the wrong length");
    c += dec.block(term.atom).adjoint() * term.y;
  }
  return RKHSElement::spectral(c.cwiseProduct(dec.sigmas.cwiseSqrt().cast<cplx>()));
}

cplx rkhs_inner(const RKHSElement& h1, const RKHSElement& h2, const SpectralDecomposition& dec,
                const MatrixKernel& kernel, const AtomSpace& space, const SupportSet& support) {
  if (h1.is_spectral() && h2.is_spectral()) {
    const CVector& a = h1.coefficients();
    const CVector& b = h2.coefficients();
    if (a.size() != b.size()) throw ValidationError("spectral elements have different lengths");
    return b.dot(a);
  }
  if (!h1.is_spectral() && !h2.is_spectral()) {
    cplx acc = 0.0;
    for (const auto& s : h1.terms()) {
      const AtomRef ax = space.atom(s.atom);
      for (const auto& r : h2.terms()) acc += r.y.dot(kernel(space.atom(r.atom), ax) * s.y);
    }
    return acc;
  }
  const RKHSElement a = h1.is_spectral() ? h1 : project(h1, dec, support);
  const RKHSElement b = h2.is_spectral() ? h2 : project(h2, dec, support);
  return rkhs_inner(a, b, dec, kernel, space, support);
}

ScalarFrame extract_frame(const SpectralDecomposition& dec, Index j) {
  if (j < 0 || j >= dec.n) {
    throw ValidationError("block index j = " + std::to_string(j) + " outside [0, " +
                          std::to_string(dec.n) + ")");
  }
  ScalarFrame frame;
  frame.j = j;
  frame.vectors.resize(dec.num_atoms, dec.rank());
  const RVector s = dec.sigmas.cwiseSqrt();
  for (Index x = 0; x < dec.num_atoms; ++x)
    for (Index i = 0; i < dec.rank(); ++i) frame.vectors(x, i) = s(i) * dec.value(i, x, j);
  return frame;
}

double frame_check(const ScalarFrame& frame, const MatrixKernel& kernel, const AtomSpace& space,
                   const SupportSet& support) {
  double worst = 0.0;
  for (Index x : support.members) {
    const double kjj = kernel.eval(space, x, x)(frame.j, frame.j).real();
    const double sum = frame.vectors.row(x).squaredNorm();
    worst = std::max(worst, std::abs(kjj - sum));
  }
  return worst;
}

double frame_check_combinations(const ScalarFrame& frame, const MatrixKernel& kernel,
                                const AtomSpace& space, const SupportSet& support, int count,
                                std::uint64_t seed) {
  if (support.members.empty()) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, support.members.size() - 1);
  std::uniform_int_distribution<int> terms(1, 3);
  std::normal_distribution<double> gauss;
  const Index j = frame.j;
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    const int r = terms(rng);
    std::vector<Index> atoms;
    CVector a(r);
    for (int k = 0; k < r; ++k) {
      atoms.push_back(support.members[pick(rng)]);
      a(k) = cplx(gauss(rng), gauss(rng));
    }
    // |h|^2 = sum_{r,s} a_r conj(a_s) K_j(x_s, x_r)
    cplx norm_sq = 0.0;
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q)
        norm_sq += a(p) * std::conj(a(q)) *
                   kernel.eval(space, atoms[static_cast<std::size_t>(q)], atoms[static_cast<std::size_t>(p)])(j, j);
    // <h, phi_i> = sum_r a_r conj(phi_i(x_r))
    CVector coeff = CVector::Zero(frame.size());
    for (int p = 0; p < r; ++p) coeff += a(p) * frame.vectors.row(atoms[static_cast<std::size_t>(p)]).adjoint();
    worst = std::max(worst, std::abs(norm_sq.real() - coeff.squaredNorm()));
  }
  return worst;
}

}  // namespace vkm
