#include "vkm/synthesis.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <unordered_map>

namespace vkm {

LabeledFrame label_frame(const ScalarFrame& frame, const AtomSpace& space) {
  if (frame.vectors.rows() != space.size()) throw ValidationError("frame does not match the atom space");
  return LabeledFrame{space.ids(), frame.vectors};
}

FrameFamily align_frames(const std::vector<LabeledFrame>& frames) {
  if (frames.empty()) throw ValidationError("align_frames: no frames given");
  FrameFamily family;
  family.atom_ids = frames.front().atom_ids;
  std::unordered_map<std::string, Index> row_of;
  for (std::size_t r = 0; r < family.atom_ids.size(); ++r) {
    if (!row_of.emplace(family.atom_ids[r], static_cast<Index>(r)).second) {
      throw ValidationError("frame lists atom '" + family.atom_ids[r] + "' twice");
    }
  }
  Index width = 0;
  for (const auto& f : frames) width = std::max(width, f.values.cols());

  const auto N = static_cast<Index>(family.atom_ids.size());
  for (std::size_t j = 0; j < frames.size(); ++j) {
    const auto& f = frames[j];
    if (f.atom_ids.size() != family.atom_ids.size() || f.values.rows() != N) {
      throw ValidationError("frame " + std::to_string(j) + " covers a different atom set");
    }
    CMatrix padded = CMatrix::Zero(N, width);
    for (std::size_t r = 0; r < f.atom_ids.size(); ++r) {
      auto it = row_of.find(f.atom_ids[r]);
      if (it == row_of.end()) {
        throw ValidationError("frame " + std::to_string(j) + " has atom '" + f.atom_ids[r] +
                              "' missing from frame 0");
      }
      padded.row(it->second).head(f.values.cols()) = f.values.row(static_cast<Index>(r));
    }
    family.frames.push_back(std::move(padded));
  }
  return family;
}

MatrixKernel synthesize_kernel(FrameFamily family) {
  const Index n = family.n();
  if (n == 0) throw ValidationError("synthesize_kernel: empty frame family");
  const Index width = family.index_count();
  const auto N = static_cast<Index>(family.atom_ids.size());

  struct Table {
    std::unordered_map<std::string, Index> row_of;
    CMatrix stacked;  // row x*n + l: f^l(x)
  };
  auto table = std::make_shared<Table>();
  table->stacked.resize(N * n, width);
  for (Index x = 0; x < N; ++x) {
    table->row_of.emplace(family.atom_ids[static_cast<std::size_t>(x)], x);
    for (Index l = 0; l < n; ++l) table->stacked.row(x * n + l) = family.frames[static_cast<std::size_t>(l)].row(x);
  }

  return MatrixKernel(
      n,
      [table, n](const AtomRef& x, const AtomRef& t) -> CMatrix {
        const auto ix = table->row_of.find(std::string(x.id));
        const auto it = table->row_of.find(std::string(t.id));
        if (ix == table->row_of.end() || it == table->row_of.end()) {
          throw KernelError("atom outside the frame family");
        }
        const auto fx = table->stacked.middleRows(ix->second * n, n);
        const auto ft = table->stacked.middleRows(it->second * n, n);
        return fx * ft.adjoint();
      },
      "frame_synth");
}

double verify_diagonal_blocks(const MatrixKernel& synthesized, const std::vector<MatrixKernel>& originals,
                              const AtomSpace& space) {
  if (static_cast<Index>(originals.size()) != synthesized.n()) {
    throw ValidationError("verify_diagonal_blocks: expected " + std::to_string(synthesized.n()) +
                          " scalar kernels, got " + std::to_string(originals.size()));
  }
  for (const auto& k : originals)
    if (k.n() != 1) throw ValidationError("verify_diagonal_blocks: original kernels must be scalar");

  double worst = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    for (Index t = 0; t < space.size(); ++t) {
      const CMatrix k = synthesized.eval(space, x, t);
      for (Index j = 0; j < synthesized.n(); ++j) {
        const cplx ref = originals[static_cast<std::size_t>(j)].eval(space, x, t)(0, 0);
        worst = std::max(worst, std::abs(k(j, j) - ref));
      }
    }
  }
  return worst;
}

std::vector<LabeledFrame> frames_from_kernels(const AtomSpace& space, const std::vector<MatrixKernel>& scalars,
                                              const EigenOptions& options) {
  std::vector<LabeledFrame> out;
  for (const auto& k : scalars) {
    if (k.n() != 1) throw ValidationError("frames_from_kernels: kernels must be scalar");
    const RescaledMeasure nu = rescale_measure(space, k);
    const DiscreteOperator op = assemble_operator(space, k, nu);
    const SpectralDecomposition dec = eigendecompose(op, space, k, nu, options);
    out.push_back(label_frame(extract_frame(dec, 0), space));
  }
  return out;
}

}  // namespace vkm
