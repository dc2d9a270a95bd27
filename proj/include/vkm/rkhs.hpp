#pragma once

#include <vector>

#include "vkm/types.hpp"

namespace vkm {

/// One term K_x y of a kernel-section expansion.
struct SectionTerm {
  Index atom = 0;
  CVector y;
};

/// An element of H_K in one of two representations:
///  - spectral: h = sum_i c_i sqrt(sigma_i) f_i over the retained eigenindices;
///  - sections: h = sum_x K_x y_x, a finite combination of kernel sections.
/// Sections at atoms outside the support have no spectral form, so both are kept.
class RKHSElement {
 public:
  enum class Form { Spectral, Sections };

  RKHSElement() = default;

  static RKHSElement spectral(CVector coefficients);
  static RKHSElement sections(std::vector<SectionTerm> terms);
  /// The kernel section K_x^j = K_x e_j.
  static RKHSElement section(Index atom, Index j, Index n);

  [[nodiscard]] Form form() const noexcept { return form_; }
  [[nodiscard]] bool is_spectral() const noexcept { return form_ == Form::Spectral; }

  /// Throws ValidationError when the element is not in spectral form.
  [[nodiscard]] const CVector& coefficients() const;
  /// Throws ValidationError when the element is not in section form.
  [[nodiscard]] const std::vector<SectionTerm>& terms() const;

  /// |h|_K^2 = sum |c_i|^2; spectral form only.
  [[nodiscard]] double spectral_norm_sq() const { return coefficients().squaredNorm(); }

 private:
  Form form_ = Form::Spectral;
  CVector coefficients_;
  std::vector<SectionTerm> terms_;
};

}  // namespace vkm
