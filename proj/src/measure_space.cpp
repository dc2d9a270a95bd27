#include "vkm/measure_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vkm {

namespace {

// Union-find with path halving; the root of a set is its smallest index.
class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace

std::pair<PseudoMetricMatrix, PseudoMetricMatrix> pseudo_metrics(const BlockGram& gram) {
  const auto N = static_cast<Index>(gram.atoms.size());
  RMatrix d = RMatrix::Zero(N, N);
  RMatrix dp = RMatrix::Zero(N, N);
  for (Index x = 0; x < N; ++x) {
    for (Index t = x + 1; t < N; ++t) {
      // Gram matrix of K_x - K_t; Hermitian PSD up to round-off.
      const CMatrix diff = gram.block(x, x) + gram.block(t, t) - gram.block(x, t) - gram.block(t, x);
      const double op = spectral_norm(diff, 1e300);
      const double tr = diff.trace().real();
      d(x, t) = d(t, x) = std::sqrt(std::max(0.0, op));
      dp(x, t) = dp(t, x) = std::sqrt(std::max(0.0, tr));
    }
  }
  return {PseudoMetricMatrix{std::move(d)}, PseudoMetricMatrix{std::move(dp)}};
}

PseudoMetricMatrix pseudo_metric(const AtomSpace& space, const MatrixKernel& kernel) {
  return pseudo_metrics(assemble_block_gram(kernel, space)).first;
}

PseudoMetricMatrix pseudo_metric_prime(const AtomSpace& space, const MatrixKernel& kernel) {
  return pseudo_metrics(assemble_block_gram(kernel, space)).second;
}

double default_tol_quotient(const AtomSpace& space, const MatrixKernel& kernel) {
  double max_norm = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    const CMatrix k = kernel.eval(space, x, x);
    max_norm = std::max(max_norm, spectral_norm(0.5 * (k + k.adjoint()), 1e300));
  }
  return 1e-9 * (1.0 + std::sqrt(max_norm));
}

Quotient quotient(const AtomSpace& space, const PseudoMetricMatrix& metric, double tol_quotient) {
  const Index N = space.size();
  if (metric.size() != N) throw ValidationError("quotient: metric size does not match the space");
  DisjointSets sets(N);
  for (Index x = 0; x < N; ++x)
    for (Index t = x + 1; t < N; ++t)
      if (metric(x, t) <= tol_quotient) sets.unite(x, t);

  Quotient q;
  q.class_of.assign(static_cast<std::size_t>(N), -1);
  std::vector<Index> class_of_root(static_cast<std::size_t>(N), -1);
  for (Index x = 0; x < N; ++x) {
    const Index root = sets.find(x);
    auto& cls = class_of_root[static_cast<std::size_t>(root)];
    if (cls < 0) {
      cls = q.num_classes();
      q.representatives.push_back(x);
      q.members.emplace_back();
    }
    q.class_of[static_cast<std::size_t>(x)] = cls;
    q.members[static_cast<std::size_t>(cls)].push_back(x);
  }
  return q;
}

SupportSet support(const AtomSpace& space, const Quotient& classes) {
  const Index N = space.size();
  std::vector<bool> charged(static_cast<std::size_t>(classes.num_classes()), false);
  for (Index x = 0; x < N; ++x)
    if (space.weight(x) > 0.0) charged[static_cast<std::size_t>(classes.class_of[static_cast<std::size_t>(x)])] = true;

  SupportSet s;
  s.mask.assign(static_cast<std::size_t>(N), false);
  for (Index x = 0; x < N; ++x) {
    if (charged[static_cast<std::size_t>(classes.class_of[static_cast<std::size_t>(x)])]) {
      s.mask[static_cast<std::size_t>(x)] = true;
      s.members.push_back(x);
    }
  }
  return s;
}

SupportSet support(const AtomSpace& space, const PseudoMetricMatrix& metric, double tol_quotient) {
  return support(space, quotient(space, metric, tol_quotient));
}

double measure_of(const AtomSpace& space, const SupportSet& set) {
  double mass = 0.0;
  for (Index x : set.members) mass += space.weight(x);
  return mass;
}

AtomSpace collapse(const AtomSpace& space, const Quotient& classes) {
  const Index C = classes.num_classes();
  std::vector<std::string> ids;
  AtomSpace::CoordMatrix coords(C, space.dim());
  RVector w = RVector::Zero(C);
  for (Index c = 0; c < C; ++c) {
    const Index rep = classes.representatives[static_cast<std::size_t>(c)];
    ids.push_back(space.id(rep));
    coords.row(c) = space.coords().row(rep);
    for (Index x : classes.members[static_cast<std::size_t>(c)]) w(c) += space.weight(x);
  }
  return AtomSpace(std::move(ids), std::move(coords), std::move(w));
}

}  // namespace vkm
