#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vkm/types.hpp"

namespace vkm {

/// Read-only view of one atom: its label and coordinates.
struct AtomRef {
  std::string_view id;
  std::span<const double> coords;
};

/// A finite measure space: labeled atoms with coordinates and a nonnegative mass each.
/// The sigma-algebra is the full power set of atoms. Immutable after construction.
class AtomSpace {
 public:
  using CoordMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  AtomSpace() = default;

  /// Throws ValidationError on duplicate labels, negative or non-finite weights,
  /// or a coordinate matrix whose row count differs from the label count.
  AtomSpace(std::vector<std::string> ids, CoordMatrix coords, RVector weights);

  [[nodiscard]] Index size() const noexcept { return static_cast<Index>(ids_.size()); }
  [[nodiscard]] Index dim() const noexcept { return coords_.cols(); }

  [[nodiscard]] const std::vector<std::string>& ids() const noexcept { return ids_; }
  [[nodiscard]] const std::string& id(Index i) const { return ids_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const CoordMatrix& coords() const noexcept { return coords_; }
  [[nodiscard]] const RVector& weights() const noexcept { return weights_; }
  [[nodiscard]] double weight(Index i) const { return weights_(i); }
  /// Plain left-to-right sum, so that subsets summed in atom order compare exactly.
  [[nodiscard]] double total_mass() const {
    double m = 0.0;
    for (Index i = 0; i < weights_.size(); ++i) m += weights_(i);
    return m;
  }

  [[nodiscard]] AtomRef atom(Index i) const;

  /// Position of `id` in declaration order; throws ValidationError for unknown labels.
  [[nodiscard]] Index index_of(std::string_view id) const;
  [[nodiscard]] bool contains(std::string_view id) const;

  /// Same atoms and coordinates with a different measure.
  [[nodiscard]] AtomSpace with_weights(RVector weights) const;

 private:
  std::vector<std::string> ids_;
  CoordMatrix coords_;
  RVector weights_;
  std::unordered_map<std::string, Index> index_;
};

}  // namespace vkm
