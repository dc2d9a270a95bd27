#include "vkm/integral_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vkm {

namespace {

// Rows of `values` that belong to the operator atoms, stacked in operator order.
CMatrix operator_rows(const SpectralDecomposition& dec) {
  const Index n = dec.n;
  CMatrix F(static_cast<Index>(dec.operator_atoms.size()) * n, dec.rank());
  for (std::size_t a = 0; a < dec.operator_atoms.size(); ++a)
    F.middleRows(static_cast<Index>(a) * n, n) = dec.block(dec.operator_atoms[a]);
  return F;
}

RVector replicated_weights(const RescaledMeasure& nu, const std::vector<Index>& atoms, Index n) {
  RVector d(static_cast<Index>(atoms.size()) * n);
  for (std::size_t a = 0; a < atoms.size(); ++a)
    d.segment(static_cast<Index>(a) * n, n).setConstant(nu.nu(atoms[a]));
  return d;
}

// Row block [K(x, t_1) ... K(x, t_m)] for the atoms t in `atoms`.
CMatrix kernel_row(const MatrixKernel& kernel, const AtomSpace& space, Index x,
                   const std::vector<Index>& atoms) {
  const Index n = kernel.n();
  CMatrix row(n, static_cast<Index>(atoms.size()) * n);
  const AtomRef ax = space.atom(x);
  for (std::size_t a = 0; a < atoms.size(); ++a)
    row.middleCols(static_cast<Index>(a) * n, n) = kernel(ax, space.atom(atoms[a]));
  return row;
}

}  // namespace

std::vector<Index> RescaledMeasure::positive_atoms() const {
  std::vector<Index> out;
  for (Index x = 0; x < nu.size(); ++x)
    if (nu(x) > 0.0) out.push_back(x);
  return out;
}

RescaledMeasure rescale_measure(const AtomSpace& space, const MatrixKernel& kernel) {
  RescaledMeasure out;
  out.nu.resize(space.size());
  for (Index x = 0; x < space.size(); ++x) {
    const CMatrix k = kernel.eval(space, x, x);
    const double norm = spectral_norm(k);
    out.nu(x) = space.weight(x) / (1.0 + norm);
    out.m_nu += k.trace().real() * out.nu(x);
  }
  return out;
}

DiscreteOperator assemble_operator(const AtomSpace& space, const MatrixKernel& kernel,
                                   const RescaledMeasure& nu, double tol_sym) {
  if (nu.size() != space.size()) throw ValidationError("assemble_operator: measure size mismatch");
  DiscreteOperator op;
  op.atoms = nu.positive_atoms();
  if (op.atoms.empty()) throw DegenerateInput("empty support: every atom has zero mass");
  op.n = kernel.n();
  op.d = replicated_weights(nu, op.atoms, op.n);
  const BlockGram gram = assemble_block_gram(kernel, space, op.atoms, tol_sym);
  const RVector s = op.d.cwiseSqrt();
  op.A = s.asDiagonal() * gram.G * s.asDiagonal();
  return op;
}

double default_tol_eig(const SpectralDecomposition& dec) {
  return 1e-9 * std::max(1.0, dec.sigma_max());
}

SpectralDecomposition eigendecompose(const DiscreteOperator& op, const AtomSpace& space,
                                     const MatrixKernel& kernel, const RescaledMeasure& /*nu*/,
                                     const EigenOptions& options) {
  if (!(options.rank_cutoff_rel >= 0.0)) throw ValidationError("rank_cutoff must be >= 0");
  const Index n = op.n;
  const HermitianEigen eig = hermitian_eigen(op.A, options.solver);

  SpectralDecomposition dec;
  dec.n = n;
  dec.num_atoms = space.size();
  dec.operator_atoms = op.atoms;
  dec.on_operator.assign(static_cast<std::size_t>(space.size()), false);
  for (Index x : op.atoms) dec.on_operator[static_cast<std::size_t>(x)] = true;
  dec.spectrum = eig.values;

  const double top = eig.values.size() > 0 ? std::max(0.0, eig.values(0)) : 0.0;
  dec.rank_cutoff = options.rank_cutoff_rel * top;
  Index rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > dec.rank_cutoff && eig.values(rank) > 0.0) ++rank;
  dec.sigmas = eig.values.head(rank);

  CMatrix U = eig.vectors.leftCols(rank);
  for (Index i = 0; i < rank; ++i) {
    auto u = U.col(i);
    const double big = u.cwiseAbs().maxCoeff();
    for (Index k = 0; k < u.size(); ++k) {
      if (std::abs(u(k)) > 1e-8 * big) {
        u *= std::conj(u(k)) / std::abs(u(k));
        u(k) = std::abs(u(k));
        break;
      }
    }
  }

  dec.values = CMatrix::Zero(space.size() * n, rank);
  const RVector inv_sqrt_d = op.d.cwiseSqrt().cwiseInverse();
  const CMatrix F_op = inv_sqrt_d.asDiagonal() * U;
  for (std::size_t a = 0; a < op.atoms.size(); ++a)
    dec.values.middleRows(op.atoms[a] * n, n) = F_op.middleRows(static_cast<Index>(a) * n, n);

  if (rank > 0) {
    // Continuous extension to atoms outside the operator: f(x) = K_x-row * (nu f) / sigma.
    const CMatrix weighted = op.d.asDiagonal() * F_op;
    const RVector inv_sigma = dec.sigmas.cwiseInverse();
    for (Index x = 0; x < space.size(); ++x) {
      if (dec.on_operator[static_cast<std::size_t>(x)]) continue;
      dec.values.middleRows(x * n, n) =
          kernel_row(kernel, space, x, op.atoms) * weighted * inv_sigma.asDiagonal();
    }
  }
  return dec;
}

SpectralDecomposition eigendecompose_quotient(const AtomSpace& space, const MatrixKernel& kernel,
                                              const Quotient& classes, const EigenOptions& options,
                                              double tol_sym) {
  if (static_cast<Index>(classes.class_of.size()) != space.size()) {
    throw ValidationError("quotient does not match the atom space");
  }
  const AtomSpace reps = collapse(space, classes);
  const RescaledMeasure nu = rescale_measure(reps, kernel);
  const DiscreteOperator op = assemble_operator(reps, kernel, nu, tol_sym);
  const SpectralDecomposition q = eigendecompose(op, reps, kernel, nu, options);

  SpectralDecomposition dec;
  dec.n = q.n;
  dec.num_atoms = space.size();
  dec.on_operator.assign(static_cast<std::size_t>(space.size()), false);
  for (Index x = 0; x < space.size(); ++x) {
    if (space.weight(x) > 0.0) {
      dec.operator_atoms.push_back(x);
      dec.on_operator[static_cast<std::size_t>(x)] = true;
    }
  }
  dec.spectrum = q.spectrum;
  dec.sigmas = q.sigmas;
  dec.rank_cutoff = q.rank_cutoff;
  dec.values.resize(space.size() * q.n, q.rank());
  for (Index x = 0; x < space.size(); ++x)
    dec.values.middleRows(x * q.n, q.n) = q.block(classes.class_of[static_cast<std::size_t>(x)]);
  return dec;
}

CVector extend_eigenfunction(const SpectralDecomposition& dec, const MatrixKernel& kernel,
                             const AtomSpace& space, const RescaledMeasure& nu, Index i, Index x) {
  if (i < 0 || i >= dec.rank()) {
    throw ValidationError("eigenfunction index " + std::to_string(i) + " is below the rank cutoff (rank " +
                          std::to_string(dec.rank()) + ")");
  }
  const double sigma = dec.sigmas(i);
  if (!(sigma > dec.rank_cutoff)) throw ValidationError("eigenvalue below rank cutoff");
  const Index n = dec.n;
  CVector acc = CVector::Zero(n);
  const AtomRef ax = space.atom(x);
  for (Index t : dec.operator_atoms) acc += kernel(ax, space.atom(t)) * dec.value(i, t) * nu.nu(t);
  return acc / sigma;
}

RKHSElement adjoint_embed(const CVector& f, const RescaledMeasure& nu, Index n) {
  if (f.size() != nu.size() * n) throw ValidationError("adjoint_embed: f has the wrong length");
  std::vector<SectionTerm> terms;
  for (Index x = 0; x < nu.size(); ++x) {
    if (nu.nu(x) > 0.0) terms.push_back({x, f.segment(x * n, n) * nu.nu(x)});
  }
  return RKHSElement::sections(std::move(terms));
}

CVector evaluate_sections(const RKHSElement& h, const MatrixKernel& kernel, const AtomSpace& space,
                          Index t) {
  CVector out = CVector::Zero(kernel.n());
  const AtomRef at = space.atom(t);
  for (const auto& term : h.terms()) out += kernel(at, space.atom(term.atom)) * term.y;
  return out;
}

TraceCheck trace_check(const SpectralDecomposition& dec, const AtomSpace& space,
                       const MatrixKernel& kernel, const RescaledMeasure& nu) {
  TraceCheck out;
  out.lhs = dec.spectrum.sum();
  for (Index x = 0; x < space.size(); ++x) {
    if (nu.nu(x) > 0.0) out.rhs += kernel.eval(space, x, x).trace().real() * nu.nu(x);
  }
  return out;
}

EmbeddingBound embedding_norm_bound_check(const RKHSElement& h, const SpectralDecomposition& dec,
                                          const RescaledMeasure& nu) {
  const CVector& c = h.coefficients();
  if (c.size() != dec.rank()) throw ValidationError("spectral element does not match the decomposition rank");
  const CVector scaled = c.cwiseProduct(dec.sigmas.cwiseSqrt().cast<cplx>());
  EmbeddingBound out;
  for (Index x : dec.operator_atoms) {
    const CVector hx = dec.block(x) * scaled;
    out.l2_sq += nu.nu(x) * hx.squaredNorm();
  }
  out.bound = nu.m_nu * c.squaredNorm();
  return out;
}

double eigen_residual(const SpectralDecomposition& dec, const AtomSpace& space,
                      const MatrixKernel& kernel, const RescaledMeasure& nu) {
  if (dec.rank() == 0) return 0.0;
  const BlockGram gram = assemble_block_gram(kernel, space, dec.operator_atoms, 1e300);
  const RVector d = replicated_weights(nu, dec.operator_atoms, dec.n);
  const CMatrix F = operator_rows(dec);
  const CMatrix R = gram.G * d.asDiagonal() * F - F * dec.sigmas.asDiagonal();
  return R.cwiseAbs().maxCoeff();
}

double l2_orthonormality_error(const SpectralDecomposition& dec, const RescaledMeasure& nu) {
  if (dec.rank() == 0) return 0.0;
  const RVector d = replicated_weights(nu, dec.operator_atoms, dec.n);
  const CMatrix F = operator_rows(dec);
  const CMatrix gram = F.adjoint() * d.asDiagonal() * F;
  return (gram - CMatrix::Identity(dec.rank(), dec.rank())).cwiseAbs().maxCoeff();
}

}  // namespace vkm
