#pragma once

// Readers and writers for the CSV file formats. Indices i, l, j in files are 0-based.
// Floating point values are written with 17 significant digits so that files round-trip
// exactly and identical inputs give byte-identical outputs.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vkm/atom_space.hpp"
#include "vkm/expansion.hpp"
#include "vkm/integral_operator.hpp"
#include "vkm/kernel.hpp"
#include "vkm/measure_space.hpp"
#include "vkm/synthesis.hpp"

namespace vkm::io {

[[nodiscard]] std::string format_double(double v);

/// `id,w,c1,...,cd`.
[[nodiscard]] AtomSpace read_atoms_csv(const std::filesystem::path& path);
void write_atoms_csv(const AtomSpace& space, const std::filesystem::path& path);

/// Block table of a precomputed kernel, keyed by (x_id, t_id).
struct PrecomputedTable {
  Index n = 0;
  std::map<std::pair<std::string, std::string>, CMatrix> blocks;
};

/// `x_id,t_id,l,j,re,im`. Blocks (or entries inside a diagonal block) given for one
/// orientation only are mirrored by Hermitian symmetry; entries given for both
/// orientations are kept as written.
[[nodiscard]] PrecomputedTable read_precomputed_csv(const std::filesystem::path& path);
[[nodiscard]] MatrixKernel table_kernel(PrecomputedTable table, std::string name = "precomputed");
/// Writes every block (x, t) with x <= t in space order.
void write_precomputed_csv(const MatrixKernel& kernel, const AtomSpace& space,
                           const std::filesystem::path& path);

/// `i,sigma`.
void write_spectrum_csv(const SpectralDecomposition& dec, const std::filesystem::path& path);
/// `i,atom_id,j,re,im`, every atom of the space.
void write_eigenfunctions_csv(const SpectralDecomposition& dec, const AtomSpace& space,
                              const std::filesystem::path& path);
/// `m,max_abs_error`.
void write_error_table_csv(const ErrorTable& table, const std::filesystem::path& path);
/// `i,atom_id,value_re,value_im` for one block.
void write_frame_csv(const LabeledFrame& frame, const std::filesystem::path& path);
[[nodiscard]] LabeledFrame read_frame_csv(const std::filesystem::path& path);
/// `x_id,t_id,d,d_prime`, all ordered pairs.
void write_metric_csv(const AtomSpace& space, const PseudoMetricMatrix& d,
                      const PseudoMetricMatrix& d_prime, const std::filesystem::path& path);

/// Writes `text` verbatim, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace vkm::io
