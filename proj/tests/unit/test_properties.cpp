// Randomized invariants over the kernel zoo. Every generator is seeded, so a failure
// names the kernel and trial that reproduce it.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/zoo.hpp"
#include "vkm/expansion.hpp"
#include "vkm/kernel_spec.hpp"
#include "vkm/pipeline.hpp"

using namespace vkm;
using namespace vkm::testing;

namespace {

constexpr int kTrials = 15;

const SpaceOptions kSmall{.min_atoms = 2, .max_atoms = 25};

double op_norm(const CMatrix& M) { return spectral_norm(0.5 * (M + M.adjoint())); }

AtomSpace permuted(const AtomSpace& s, const std::vector<Index>& perm) {
  std::vector<std::string> ids;
  AtomSpace::CoordMatrix c(s.size(), s.dim());
  RVector w(s.size());
  for (Index k = 0; k < s.size(); ++k) {
    const Index from = perm[static_cast<std::size_t>(k)];
    ids.push_back(s.id(from));
    c.row(k) = s.coords().row(from);
    w(k) = s.weight(from);
  }
  return AtomSpace(std::move(ids), std::move(c), std::move(w));
}

}  // namespace

TEST_CASE("kernel pair law K(t,x) = K(x,t)^*") {
  Rng rng(51);
  for (const auto& z : zoo()) {
    CAPTURE(z.name);
    const MatrixKernel k = build_kernel(z.spec);
    for (int trial = 0; trial < kTrials; ++trial) {
      const AtomSpace s = random_space(rng, kSmall);
      CHECK(max_hermitian_deviation(raw_block_gram(k, s, {})) <= 1e-14);
    }
  }
}

TEST_CASE("pseudo-metrics: triangle inequality and d <= d' <= sqrt(n) d") {
  Rng rng(52);
  for (const auto& z : zoo()) {
    CAPTURE(z.name);
    const MatrixKernel k = build_kernel(z.spec);
    const double rootn = std::sqrt(static_cast<double>(k.n()));
    for (int trial = 0; trial < kTrials; ++trial) {
      CAPTURE(trial);
      const AtomSpace s = random_space(rng, kSmall);
      const auto [d, dp] = pseudo_metrics(assemble_block_gram(k, s));
      double scale = 1.0;
      for (Index x = 0; x < s.size(); ++x) scale = std::max(scale, std::sqrt(op_norm(k.eval(s, x, x)) * k.n()));
      const double eps = 1e-7 * scale;  // sqrt of rounding in the Gram entries
      bool tri = true, sandwich = true;
      for (Index x = 0; x < s.size(); ++x)
        for (Index t = 0; t < s.size(); ++t) {
          sandwich = sandwich && d(x, t) <= dp(x, t) + eps && dp(x, t) <= rootn * d(x, t) + eps;
          for (Index u = 0; u < s.size(); ++u) {
            tri = tri && d(x, t) <= d(x, u) + d(u, t) + eps;
            tri = tri && dp(x, t) <= dp(x, u) + dp(u, t) + eps;
          }
        }
      CHECK(tri);
      CHECK(sandwich);
    }
  }
}

TEST_CASE("quotient classes are kernel-indistinguishable") {
  Rng rng(53);
  for (const auto& z : zoo()) {
    CAPTURE(z.name);
    const MatrixKernel k = build_kernel(z.spec);
    for (int trial = 0; trial < kTrials; ++trial) {
      const AtomSpace s = random_space(rng, {.min_atoms = 2, .max_atoms = 20, .duplicate_prob = 0.4});
      const double tol = default_tol_quotient(s, k);
      const Quotient q = quotient(s, pseudo_metric(s, k), tol);
      // |K(x,u) - K(t,u)| <= d(x,t) |K(u,u)|^{1/2}, and chains add up their steps.
      for (const auto& cls : q.members) {
        for (std::size_t a = 1; a < cls.size(); ++a)
          for (Index u = 0; u < s.size(); ++u) {
            const double bound = static_cast<double>(cls.size()) * tol * std::sqrt(op_norm(k.eval(s, u, u))) + 1e-12;
            CHECK((k.eval(s, cls[a], u) - k.eval(s, cls[0], u)).cwiseAbs().maxCoeff() <= bound);
          }
      }
      // Exact duplicates always share a class.
      for (Index x = 0; x < s.size(); ++x)
        for (Index t = 0; t < x; ++t)
          if (s.coords().row(x) == s.coords().row(t) && z.name.find("delta") == std::string::npos)
            CHECK(q.class_of[static_cast<std::size_t>(x)] == q.class_of[static_cast<std::size_t>(t)]);
    }
  }
}

TEST_CASE("eigenpairs: residual, spectrum scaling with the measure, permutation invariance") {
  Rng rng(54);
  for (const auto& z : zoo()) {
    CAPTURE(z.name);
    const MatrixKernel k = build_kernel(z.spec);
    for (int trial = 0; trial < 5; ++trial) {
      CAPTURE(trial);
      const AtomSpace s = random_space(rng, kSmall);
      const Analysis a = analyze(s, k);
      REQUIRE(a.decomposed);
      CHECK(eigen_residual(a.dec, a.space, a.kernel, a.nu) <= a.tol.tol_eig);
      CHECK(a.trace.ok());

      // Scaling mu by c scales nu, hence every eigenvalue, by c.
      const double c = 2.5;
      const Analysis b = analyze(s.with_weights(c * s.weights()), k);
      REQUIRE(b.dec.spectrum.size() == a.dec.spectrum.size());
      CHECK((b.dec.spectrum - c * a.dec.spectrum).cwiseAbs().maxCoeff() <= b.tol.tol_eig);

      std::vector<Index> perm(static_cast<std::size_t>(s.size()));
      std::iota(perm.begin(), perm.end(), Index{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      const Analysis p = analyze(permuted(s, perm), k);
      REQUIRE(p.dec.spectrum.size() == a.dec.spectrum.size());
      CHECK((p.dec.spectrum - a.dec.spectrum).cwiseAbs().maxCoeff() <= a.tol.tol_eig);
    }
  }
}

TEST_CASE("Jacobi and tridiagonal pipelines agree") {
  Rng rng(55);
  for (const auto& z : zoo()) {
    CAPTURE(z.name);
    const MatrixKernel k = build_kernel(z.spec);
    for (int trial = 0; trial < 3; ++trial) {
      const AtomSpace s = random_space(rng, {.min_atoms = 2, .max_atoms = 15});
      const Analysis t = analyze(s, k);
      const Analysis j = analyze(s, k, {.solver = EigenSolverKind::Jacobi});
      REQUIRE(t.dec.spectrum.size() == j.dec.spectrum.size());
      CHECK((t.dec.spectrum - j.dec.spectrum).cwiseAbs().maxCoeff() <= t.tol.tol_eig);
      // Eigenvectors of repeated eigenvalues differ, but the reconstructed kernel does not.
      const MercerExpansion et(t.dec, t.dec.rank());
      const MercerExpansion ej(j.dec, j.dec.rank());
      double worst = 0.0;
      for (Index x = 0; x < s.size(); ++x)
        for (Index u = 0; u < s.size(); ++u)
          worst = std::max(worst, (reconstruct(et, x, u) - reconstruct(ej, x, u)).cwiseAbs().maxCoeff());
      CHECK(worst <= 2.0 * t.tol.tol_recon);
    }
  }
}

TEST_CASE("truncation error: diagonal monotone, off-diagonal bounded by the diagonal") {
  Rng rng(56);
  for (const auto& z : zoo()) {
    CAPTURE(z.name);
    const MatrixKernel k = build_kernel(z.spec);
    const AtomSpace s = random_space(rng, kSmall);
    const Analysis a = analyze(s, k);
    const ErrorTable e = reconstruction_error(a.dec, a.kernel, a.space, a.support.members);
    CHECK(e.max_abs_error.back() <= a.tol.tol_recon);
    for (std::size_t m = 1; m < e.m.size(); ++m) {
      CHECK(e.max_diag_error[m] <= e.max_diag_error[m - 1] + a.tol.tol_eig);
      CHECK(e.max_abs_error[m] <= e.max_diag_error[m] + a.tol.tol_eig);
    }
  }
}
