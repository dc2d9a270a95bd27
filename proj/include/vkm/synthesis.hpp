#pragma once

#include <string>
#include <vector>

#include "vkm/atom_space.hpp"
#include "vkm/expansion.hpp"
#include "vkm/integral_operator.hpp"
#include "vkm/kernel.hpp"

namespace vkm {

/// Scalar frame functions over labeled atoms: values(x, i) = f_i(x).
struct LabeledFrame {
  std::vector<std::string> atom_ids;
  CMatrix values;
};

/// n scalar frames over a shared finite index set and a shared atom order.
struct FrameFamily {
  std::vector<std::string> atom_ids;
  std::vector<CMatrix> frames;  // frames[j](x, i) = f_i^j(x)

  [[nodiscard]] Index n() const noexcept { return static_cast<Index>(frames.size()); }
  [[nodiscard]] Index index_count() const { return frames.empty() ? 0 : frames.front().cols(); }
};

[[nodiscard]] LabeledFrame label_frame(const ScalarFrame& frame, const AtomSpace& space);

/// Unifies the index sets by zero-padding to the largest frame and reorders atoms to the
/// first frame's order. Throws ValidationError if the frames cover different atom sets.
[[nodiscard]] FrameFamily align_frames(const std::vector<LabeledFrame>& frames);

/// K(x,t)_{lj} = sum_i f_i^l(x) conj(f_i^j(t)). Evaluation at atoms outside the family
/// throws KernelError.
[[nodiscard]] MatrixKernel synthesize_kernel(FrameFamily family);

/// max_{x,t,j} |K_synth(x,t)_{jj} - K_j(x,t)| over all atoms of `space`.
[[nodiscard]] double verify_diagonal_blocks(const MatrixKernel& synthesized,
                                            const std::vector<MatrixKernel>& originals,
                                            const AtomSpace& space);

/// Decomposes each scalar kernel against the measure of `space` and returns its
/// frame {sqrt(sigma_i) f_i} as a labeled frame.
[[nodiscard]] std::vector<LabeledFrame> frames_from_kernels(const AtomSpace& space,
                                                            const std::vector<MatrixKernel>& scalars,
                                                            const EigenOptions& options = {});

}  // namespace vkm
