#include "vkm/rkhs.hpp"

namespace vkm {

RKHSElement RKHSElement::spectral(CVector coefficients) {
  RKHSElement h;
  h.form_ = Form::Spectral;
  h.coefficients_ = std::move(coefficients);
  return h;
}

RKHSElement RKHSElement::sections(std::vector<SectionTerm> terms) {
  RKHSElement h;
  h.form_ = Form::Sections;
  h.terms_ = std::move(terms);
  return h;
}

RKHSElement RKHSElement::section(Index atom, Index j, Index n) {
  if (j < 0 || j >= n) throw ValidationError("section component j out of range");
  CVector y = CVector::Zero(n);
  y(j) = 1.0;
  return sections({SectionTerm{atom, std::move(y)}});
}

const CVector& RKHSElement::coefficients() const {
  if (form_ != Form::Spectral) throw ValidationError("element is not in spectral form");
  return coefficients_;
}

const std::vector<SectionTerm>& RKHSElement::terms() const {
  if (form_ != Form::Sections) throw ValidationError("element is not in kernel-section form");
  return terms_;
}

}  // namespace vkm
