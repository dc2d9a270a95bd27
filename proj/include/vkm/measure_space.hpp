#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vkm/atom_space.hpp"
#include "vkm/kernel.hpp"

namespace vkm {

/// Symmetric matrix of pairwise kernel pseudo-distances over all atoms of a space.
struct PseudoMetricMatrix {
  RMatrix d;

  [[nodiscard]] Index size() const noexcept { return d.rows(); }
  [[nodiscard]] double operator()(Index x, Index t) const { return d(x, t); }
};

/// Partition of the atoms into classes of kernel-indistinguishable points.
struct Quotient {
  std::vector<Index> class_of;         // atom index -> class id
  std::vector<Index> representatives;  // class id -> first atom of the class
  std::vector<std::vector<Index>> members;

  [[nodiscard]] Index num_classes() const noexcept { return static_cast<Index>(representatives.size()); }
};

struct SupportSet {
  std::vector<Index> members;  // ascending atom indices
  std::vector<bool> mask;      // mask[x] == true iff x is a member

  [[nodiscard]] bool contains(Index x) const { return mask.at(static_cast<std::size_t>(x)); }
  [[nodiscard]] Index size() const noexcept { return static_cast<Index>(members.size()); }
};

/// d(x,t) = sqrt(|K(x,x) + K(t,t) - K(x,t) - K(t,x)|_op), the norm of K_x - K_t as an
/// operator C^n -> H_K.
[[nodiscard]] PseudoMetricMatrix pseudo_metric(const AtomSpace& space, const MatrixKernel& kernel);

/// d'(x,t) = sqrt(tr K(x,x) + tr K(t,t) - 2 Re tr K(t,x)); d <= d' <= sqrt(n) d.
[[nodiscard]] PseudoMetricMatrix pseudo_metric_prime(const AtomSpace& space,
                                                     const MatrixKernel& kernel);

/// Both metrics from one Gram assembly.
[[nodiscard]] std::pair<PseudoMetricMatrix, PseudoMetricMatrix> pseudo_metrics(
    const BlockGram& gram);

/// 1e-9 * (1 + max_x |K(x,x)|^{1/2}).
[[nodiscard]] double default_tol_quotient(const AtomSpace& space, const MatrixKernel& kernel);

/// Transitive closure of d <= tol. Classes are numbered in order of their first atom.
[[nodiscard]] Quotient quotient(const AtomSpace& space, const PseudoMetricMatrix& metric,
                                double tol_quotient);

/// Union of the quotient classes that carry positive mass.
[[nodiscard]] SupportSet support(const AtomSpace& space, const Quotient& classes);
[[nodiscard]] SupportSet support(const AtomSpace& space, const PseudoMetricMatrix& metric,
                                 double tol_quotient);

/// Total mass of the atoms in `set`.
[[nodiscard]] double measure_of(const AtomSpace& space, const SupportSet& set);

/// Merges each quotient class into its representative, summing masses.
[[nodiscard]] AtomSpace collapse(const AtomSpace& space, const Quotient& classes);

}  // namespace vkm
