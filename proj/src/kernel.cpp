#include "vkm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vkm/eigensolver.hpp"

namespace vkm {

namespace {

std::vector<Index> all_atoms(const AtomSpace& space) {
  std::vector<Index> atoms(static_cast<std::size_t>(space.size()));
  std::iota(atoms.begin(), atoms.end(), Index{0});
  return atoms;
}

}  // namespace

MatrixKernel::MatrixKernel(Index n, Evaluator eval, std::string name)
    : n_(n), eval_(std::move(eval)), name_(std::move(name)) {
  if (n_ < 1) throw ValidationError("kernel output dimension n must be >= 1");
  if (!eval_) throw ValidationError("kernel evaluator is empty");
}

CMatrix MatrixKernel::operator()(const AtomRef& x, const AtomRef& t) const {
  CMatrix k;
  try {
    k = eval_(x, t);
  } catch (const std::exception& e) {
    throw KernelError("kernel '" + name_ + "' failed at (" + std::string(x.id) + ", " +
                      std::string(t.id) + "): " + e.what());
  }
  if (k.rows() != n_ || k.cols() != n_) {
    throw KernelError("kernel '" + name_ + "' returned a " + std::to_string(k.rows()) + "x" +
                      std::to_string(k.cols()) + " block at (" + std::string(x.id) + ", " +
                      std::string(t.id) + "), expected " + std::to_string(n_) + "x" +
                      std::to_string(n_));
  }
  return k;
}

CMatrix raw_block_gram(const MatrixKernel& kernel, const AtomSpace& space,
                       const std::vector<Index>& atoms) {
  const Index n = kernel.n();
  const auto N = static_cast<Index>(atoms.size());
  CMatrix G(N * n, N * n);
  for (Index a = 0; a < N; ++a) {
    const AtomRef x = space.atom(atoms[static_cast<std::size_t>(a)]);
    for (Index b = 0; b < N; ++b) {
      G.block(a * n, b * n, n, n) = kernel(x, space.atom(atoms[static_cast<std::size_t>(b)]));
    }
  }
  return G;
}

double max_hermitian_deviation(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

BlockGram assemble_block_gram(const MatrixKernel& kernel, const AtomSpace& space,
                              std::vector<Index> atoms, double tol_sym) {
  if (atoms.empty()) atoms = all_atoms(space);
  CMatrix G = raw_block_gram(kernel, space, atoms);
  const double dev = max_hermitian_deviation(G);
  if (!(dev <= tol_sym)) {
    throw KernelError("kernel violates Hermitian pair symmetry K(x,t) = K(t,x)^*: max deviation " +
                      std::to_string(dev));
  }
  CMatrix H = 0.5 * (G + G.adjoint());
  return BlockGram{std::move(atoms), kernel.n(), std::move(H)};
}

double default_tol_psd(double max_eigenvalue) { return 1e-10 * std::max(1.0, max_eigenvalue); }

ValidationReport validate_kernel(const MatrixKernel& kernel, const AtomSpace& space,
                                 std::vector<Index> atoms, double tol_sym) {
  if (atoms.empty()) atoms = all_atoms(space);
  ValidationReport report;
  report.tol_sym = tol_sym;
  const CMatrix G = raw_block_gram(kernel, space, atoms);
  report.max_hermitian_deviation = max_hermitian_deviation(G);
  report.hermitian_ok = report.max_hermitian_deviation <= tol_sym;
  if (G.size() > 0) {
    const RVector ev = hermitian_eigenvalues(0.5 * (G + G.adjoint()));
    report.max_eigenvalue = ev(0);
    report.min_eigenvalue = ev(ev.size() - 1);
  }
  report.tol_psd = default_tol_psd(report.max_eigenvalue);
  report.psd_ok = report.min_eigenvalue >= -report.tol_psd;
  return report;
}

double spectral_norm(const CMatrix& M, double tol_sym) {
  if (M.rows() != M.cols()) throw ValidationError("spectral_norm: matrix is not square");
  if (M.size() == 0) return 0.0;
  const double dev = max_hermitian_deviation(M);
  if (!(dev <= tol_sym)) {
    throw ValidationError("spectral_norm: matrix is not Hermitian (deviation " + std::to_string(dev) +
                          ")");
  }
  if (M.rows() == 1) return std::abs(M(0, 0).real());
  const RVector ev = hermitian_eigenvalues(0.5 * (M + M.adjoint()));
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace vkm
