#include "vkm/atom_space.hpp"

#include <cmath>

namespace vkm {

AtomSpace::AtomSpace(std::vector<std::string> ids, CoordMatrix coords, RVector weights)
    : ids_(std::move(ids)), coords_(std::move(coords)), weights_(std::move(weights)) {
  const auto n = static_cast<Index>(ids_.size());
  if (coords_.rows() != n && !(n == 0 && coords_.size() == 0)) {
    throw ValidationError("coords: expected " + std::to_string(n) + " rows, got " +
                          std::to_string(coords_.rows()));
  }
  if (coords_.rows() != n) coords_.resize(n, 0);
  if (weights_.size() != n) {
    throw ValidationError("weights: expected " + std::to_string(n) + " entries, got " +
                          std::to_string(weights_.size()));
  }
  index_.reserve(ids_.size());
  for (Index i = 0; i < n; ++i) {
    const auto& id = ids_[static_cast<std::size_t>(i)];
    if (id.empty()) throw ValidationError("atom label at position " + std::to_string(i) + " is empty");
    if (!index_.emplace(id, i).second) throw ValidationError("duplicate atom label '" + id + "'");
    if (!std::isfinite(weights_(i)) || weights_(i) < 0.0) {
      throw ValidationError("weight of atom '" + id + "' must be finite and >= 0");
    }
    for (Index k = 0; k < coords_.cols(); ++k) {
      if (!std::isfinite(coords_(i, k))) {
        throw ValidationError("coordinate " + std::to_string(k + 1) + " of atom '" + id +
                              "' is not finite");
      }
    }
  }
}

AtomRef AtomSpace::atom(Index i) const {
  const auto& id = ids_.at(static_cast<std::size_t>(i));
  const double* row = coords_.cols() > 0 ? coords_.row(i).data() : nullptr;
  return {id, std::span<const double>(row, static_cast<std::size_t>(coords_.cols()))};
}

Index AtomSpace::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw ValidationError("unknown atom id '" + std::string(id) + "'");
  return it->second;
}

bool AtomSpace::contains(std::string_view id) const {
  return index_.find(std::string(id)) != index_.end();
}

AtomSpace AtomSpace::with_weights(RVector weights) const {
  return AtomSpace(ids_, coords_, std::move(weights));
}

}  // namespace vkm
