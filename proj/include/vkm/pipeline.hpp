#pragma once

// End-to-end analysis of one (atom space, kernel) pair, shared by the CLI and the
// Python module.

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vkm/expansion.hpp"
#include "vkm/integral_operator.hpp"
#include "vkm/kernel.hpp"
#include "vkm/measure_space.hpp"

namespace vkm {

/// User overrides; unset fields fall back to the data-dependent defaults.
struct ToleranceOverrides {
  std::optional<double> tol_sym;
  std::optional<double> tol_quotient;
  std::optional<double> rank_cutoff;  // relative to sigma_1
  std::optional<double> tol_eig;
  std::optional<double> tol_recon;

  /// Throws ValidationError for non-positive (or, for rank_cutoff, negative) values.
  void check() const;
};

struct Tolerances {
  double tol_sym = kDefaultTolSym;
  double tol_psd = 0.0;
  double tol_quotient = 0.0;
  double rank_cutoff = 1e-12;
  double tol_eig = 0.0;
  double tol_recon = 0.0;
};

struct AnalysisOptions {
  ToleranceOverrides overrides;
  EigenSolverKind solver = EigenSolverKind::Tridiagonal;
  bool decompose = true;
};

struct Analysis {
  AtomSpace space;
  MatrixKernel kernel;
  Tolerances tol;
  ValidationReport validation;
  PseudoMetricMatrix metric;
  PseudoMetricMatrix metric_prime;
  Quotient classes;
  SupportSet support;
  RescaledMeasure nu;
  bool decomposed = false;
  SpectralDecomposition dec;
  TraceCheck trace;
};

/// Validates the kernel, computes metrics, quotient and support, and (when requested
/// and the kernel passes validation) the spectral decomposition of L_nu.
/// Throws DegenerateInput for a measure with empty support when decomposing.
[[nodiscard]] Analysis analyze(AtomSpace space, MatrixKernel kernel, const AnalysisOptions& options = {});

[[nodiscard]] nlohmann::json to_json(const ValidationReport& report);
[[nodiscard]] nlohmann::json to_json(const Tolerances& tol);
[[nodiscard]] nlohmann::json to_json(const ErrorTable& table);

/// Summary of an analysis: validation, |support|, quotient classes, M_nu, spectrum head,
/// trace residual.
[[nodiscard]] nlohmann::json summary_json(const Analysis& a, Index spectrum_head = 10);

/// Plain-text rendering of a report produced by the CLI.
[[nodiscard]] std::string render_text(const nlohmann::json& report);

}  // namespace vkm
