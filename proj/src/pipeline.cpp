#include "vkm/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <fmt/format.h>

namespace vkm {

namespace {

void require_positive(const std::optional<double>& v, const char* name) {
  if (v && !(std::isfinite(*v) && *v > 0.0)) {
    throw ValidationError(fmt::format("{} must be a positive number, got {}", name, *v));
  }
}

}  // namespace

void ToleranceOverrides::check() const {
  require_positive(tol_sym, "tol_sym");
  require_positive(tol_quotient, "tol_quotient");
  require_positive(tol_eig, "tol_eig");
  require_positive(tol_recon, "tol_recon");
  if (rank_cutoff && !(std::isfinite(*rank_cutoff) && *rank_cutoff >= 0.0)) {
    throw ValidationError(fmt::format("rank_cutoff must be >= 0, got {}", *rank_cutoff));
  }
}

Analysis analyze(AtomSpace space, MatrixKernel kernel, const AnalysisOptions& options) {
  const ToleranceOverrides& ov = options.overrides;
  ov.check();

  Analysis a;
  a.space = std::move(space);
  a.kernel = std::move(kernel);
  a.tol.tol_sym = ov.tol_sym.value_or(kDefaultTolSym);
  a.tol.rank_cutoff = ov.rank_cutoff.value_or(EigenOptions{}.rank_cutoff_rel);

  a.validation = validate_kernel(a.kernel, a.space, {}, a.tol.tol_sym);
  a.tol.tol_psd = a.validation.tol_psd;
  a.tol.tol_quotient = ov.tol_quotient.value_or(default_tol_quotient(a.space, a.kernel));
  a.tol.tol_recon = ov.tol_recon.value_or(default_tol_recon(a.space, a.kernel));
  a.tol.tol_eig = ov.tol_eig.value_or(1e-9);
  if (!a.validation.passed()) return a;

  const BlockGram gram = assemble_block_gram(a.kernel, a.space, {}, a.tol.tol_sym);
  std::tie(a.metric, a.metric_prime) = pseudo_metrics(gram);
  a.classes = quotient(a.space, a.metric, a.tol.tol_quotient);
  a.support = support(a.space, a.classes);
  a.nu = rescale_measure(a.space, a.kernel);

  if (!options.decompose) return a;
  a.dec = eigendecompose_quotient(a.space, a.kernel, a.classes, EigenOptions{a.tol.rank_cutoff, options.solver},
                                  a.tol.tol_sym);
  a.decomposed = true;
  a.tol.tol_eig = ov.tol_eig.value_or(default_tol_eig(a.dec));
  a.trace = trace_check(a.dec, a.space, a.kernel, a.nu);
  return a;
}

nlohmann::json to_json(const ValidationReport& r) {
  return {{"passed", r.passed()},
          {"hermitian_ok", r.hermitian_ok},
          {"psd_ok", r.psd_ok},
          {"max_hermitian_deviation", r.max_hermitian_deviation},
          {"min_eigenvalue", r.min_eigenvalue},
          {"max_eigenvalue", r.max_eigenvalue},
          {"tol_sym", r.tol_sym},
          {"tol_psd", r.tol_psd}};
}

nlohmann::json to_json(const Tolerances& t) {
  return {{"tol_sym", t.tol_sym},     {"tol_psd", t.tol_psd},     {"tol_quotient", t.tol_quotient},
          {"rank_cutoff", t.rank_cutoff}, {"tol_eig", t.tol_eig}, {"tol_recon", t.tol_recon}};
}

nlohmann::json to_json(const ErrorTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < table.m.size(); ++k) {
    rows.push_back({{"m", table.m[k]},
                    {"max_abs_error", table.max_abs_error[k]},
                    {"max_diag_error", table.max_diag_error[k]}});
  }
  return rows;
}

nlohmann::json summary_json(const Analysis& a, Index spectrum_head) {
  nlohmann::json j;
  j["atoms"] = a.space.size();
  j["n"] = a.kernel.n();
  j["kernel"] = a.kernel.name();
  j["tolerances"] = to_json(a.tol);
  j["validation"] = to_json(a.validation);
  if (!a.validation.passed()) return j;

  j["support_size"] = a.support.size();
  j["quotient_classes"] = a.classes.num_classes();
  j["mu_total"] = a.space.total_mass();
  j["mu_support"] = measure_of(a.space, a.support);
  j["M_nu"] = a.nu.m_nu;
  if (!a.decomposed) return j;

  j["rank"] = a.dec.rank();
  nlohmann::json head = nlohmann::json::array();
  for (Index i = 0; i < std::min(spectrum_head, a.dec.rank()); ++i) head.push_back(a.dec.sigmas(i));
  j["spectrum_head"] = head;
  j["trace"] = {{"sum_sigma", a.trace.lhs},
                {"sum_tr_K_nu", a.trace.rhs},
                {"residual", a.trace.residual()},
                {"ok", a.trace.ok()}};
  return j;
}

namespace {

void render(std::ostringstream& os, const nlohmann::json& j, const std::string& indent) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      os << indent << key << ":\n";
      render(os, value, indent + "  ");
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      os << indent << key << ":\n";
      for (const auto& row : value) {
        os << indent << "  -";
        for (const auto& [k, v] : row.items()) os << ' ' << k << '=' << v.dump();
        os << '\n';
      }
    } else {
      os << indent << key << ": " << value.dump() << '\n';
    }
  }
}

}  // namespace

std::string render_text(const nlohmann::json& report) {
  std::ostringstream os;
  render(os, report, "");
  return os.str();
}

}  // namespace vkm
