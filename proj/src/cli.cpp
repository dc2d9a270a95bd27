#include "vkm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vkm/csv_io.hpp"
#include "vkm/kernel_spec.hpp"
#include "vkm/pipeline.hpp"

namespace vkm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

constexpr int kCombinationChecks = 50;
constexpr std::uint64_t kCombinationSeed = 20240611;

/// Effective settings after merging defaults, the config file and flags.
struct Settings {
  std::optional<fs::path> atoms;
  std::optional<fs::path> kernel;
  fs::path out = ".";
  ToleranceOverrides tol;
  std::optional<std::vector<std::string>> subset;
  std::optional<std::vector<long long>> truncations;
  EigenSolverKind solver = EigenSolverKind::Tridiagonal;
  std::optional<long long> block;
  std::vector<fs::path> frames;
  std::vector<fs::path> kernels;
};

/// Raw flag storage; a flag is only applied when it was given on the command line.
struct Flags {
  std::string config;
  std::string atoms, kernel, out, solver;
  double tol_eig = 0, tol_recon = 0, tol_quotient = 0, tol_sym = 0, rank_cutoff = 0;
  std::vector<std::string> subset;
  std::vector<long long> truncations;
  long long block = 0;
  std::vector<std::string> frames, kernels;
};

EigenSolverKind parse_solver(const std::string& s) {
  if (s == "tridiagonal" || s == "eigen") return EigenSolverKind::Tridiagonal;
  if (s == "jacobi") return EigenSolverKind::Jacobi;
  throw UsageError("unknown solver '" + s + "' (expected tridiagonal or jacobi)");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::size_t end = comma == std::string::npos ? s.size() : comma;
    if (end > start) out.push_back(s.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
std::vector<T> json_list(const json& v, const char* key) {
  if (v.is_array()) return v.get<std::vector<T>>();
  if constexpr (std::is_same_v<T, std::string>) {
    if (v.is_string()) return split_list(v.get<std::string>());
  } else {
    if (v.is_string()) {
      std::vector<T> out;
      for (const auto& s : split_list(v.get<std::string>())) out.push_back(static_cast<T>(std::stoll(s)));
      return out;
    }
  }
  throw UsageError(fmt::format("config: '{}' must be a list or a comma-separated string", key));
}

void apply_config(Settings& s, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("file not found: " + path.string());
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(fmt::format("{}: {}", path.string(), e.what()));
  }
  if (!cfg.is_object()) throw UsageError(path.string() + ": config must be a JSON object");
  const fs::path base = path.parent_path();
  auto resolve = [&](const json& v) { return base / fs::path(v.get<std::string>()); };

  for (const auto& [key, v] : cfg.items()) {
    try {
      if (key == "atoms") s.atoms = resolve(v);
      else if (key == "kernel") s.kernel = resolve(v);
      else if (key == "out") s.out = resolve(v);
      else if (key == "tol_eig") s.tol.tol_eig = v.get<double>();
      else if (key == "tol_recon") s.tol.tol_recon = v.get<double>();
      else if (key == "tol_quotient") s.tol.tol_quotient = v.get<double>();
      else if (key == "tol_sym") s.tol.tol_sym = v.get<double>();
      else if (key == "rank_cutoff") s.tol.rank_cutoff = v.get<double>();
      else if (key == "subset") s.subset = json_list<std::string>(v, "subset");
      else if (key == "truncations") s.truncations = json_list<long long>(v, "truncations");
      else if (key == "solver") s.solver = parse_solver(v.get<std::string>());
      else if (key == "block") s.block = v.get<long long>();
      else if (key == "frames" || key == "kernels") {
        std::vector<fs::path> paths;
        for (const auto& p : json_list<std::string>(v, key.c_str())) paths.push_back(base / p);
        (key == "frames" ? s.frames : s.kernels) = std::move(paths);
      } else {
        throw UsageError(fmt::format("{}: unknown config key '{}'", path.string(), key));
      }
    } catch (const json::exception& e) {
      throw UsageError(fmt::format("{}: bad value for '{}': {}", path.string(), key, e.what()));
    }
  }
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--atoms", f.atoms, "Atom CSV (id,w,c1,...,cd)");
  sub->add_option("--kernel", f.kernel, "Kernel spec JSON");
  sub->add_option("--out", f.out, "Output directory (default: current directory)");
  sub->add_option("--tol-eig", f.tol_eig, "Eigen-equation tolerance (default 1e-9 * max(1, sigma_1))");
  sub->add_option("--tol-recon", f.tol_recon, "Reconstruction tolerance (default 1e-8 * (1 + max K(x,x)_ll))");
  sub->add_option("--tol-quotient", f.tol_quotient,
                  "Pseudo-distance zero test (default 1e-9 * (1 + max |K(x,x)|^1/2))");
  sub->add_option("--tol-sym", f.tol_sym, "Hermitian symmetry tolerance (default 1e-10)");
  sub->add_option("--rank-cutoff", f.rank_cutoff, "Relative eigenvalue cutoff, times sigma_1 (default 1e-12)");
  sub->add_option("--subset", f.subset, "Comma-separated atom ids (default: the support)")->delimiter(',');
  sub->add_option("--truncations", f.truncations, "Comma-separated truncation orders m")->delimiter(',');
  sub->add_option("--solver", f.solver, "Eigensolver: tridiagonal (default) or jacobi");
}

bool given(const CLI::App* sub, const char* name) { return sub->get_option(name)->count() > 0; }

Settings resolve_settings(const CLI::App* sub, const Flags& f) {
  Settings s;
  if (given(sub, "--config")) apply_config(s, f.config);
  if (given(sub, "--atoms")) s.atoms = f.atoms;
  if (given(sub, "--kernel")) s.kernel = f.kernel;
  if (given(sub, "--out")) s.out = f.out;
  if (given(sub, "--tol-eig")) s.tol.tol_eig = f.tol_eig;
  if (given(sub, "--tol-recon")) s.tol.tol_recon = f.tol_recon;
  if (given(sub, "--tol-quotient")) s.tol.tol_quotient = f.tol_quotient;
  if (given(sub, "--tol-sym")) s.tol.tol_sym = f.tol_sym;
  if (given(sub, "--rank-cutoff")) s.tol.rank_cutoff = f.rank_cutoff;
  if (given(sub, "--subset")) s.subset = f.subset;
  if (given(sub, "--truncations")) s.truncations = f.truncations;
  if (given(sub, "--solver")) s.solver = parse_solver(f.solver);
  if (sub->get_option_no_throw("--block") && given(sub, "--block")) s.block = f.block;
  if (sub->get_option_no_throw("--frames") && given(sub, "--frames"))
    s.frames.assign(f.frames.begin(), f.frames.end());
  if (sub->get_option_no_throw("--kernels") && given(sub, "--kernels"))
    s.kernels.assign(f.kernels.begin(), f.kernels.end());
  try {
    s.tol.check();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return s;
}

AtomSpace load_atoms(const Settings& s) {
  if (!s.atoms) throw UsageError("--atoms is required");
  return io::read_atoms_csv(*s.atoms);
}

MatrixKernel load_kernel(const fs::path& path) {
  try {
    return build_kernel(load_kernel_spec(path));
  } catch (const ValidationError& e) {
    throw UsageError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Analysis run_analysis(const Settings& s, bool decompose) {
  if (!s.kernel) throw UsageError("--kernel is required");
  AtomSpace space = load_atoms(s);
  MatrixKernel kernel = load_kernel(*s.kernel);
  AnalysisOptions options;
  options.overrides = s.tol;
  options.solver = s.solver;
  options.decompose = decompose;
  return analyze(std::move(space), std::move(kernel), options);
}

void emit_report(const Settings& s, const std::string& command, json report) {
  report["command"] = command;
  fs::create_directories(s.out);
  io::write_text(s.out / "report.json", report.dump(2) + "\n");
  const std::string text = render_text(report);
  io::write_text(s.out / "report.txt", text);
  std::cout << text;
}

void prepare_out(const Settings& s) { fs::create_directories(s.out); }

int cmd_validate(const Settings& s) {
  const Analysis a = run_analysis(s, false);
  emit_report(s, "validate", summary_json(a));
  return a.validation.passed() ? kExitOk : kExitValidation;
}

int cmd_metric(const Settings& s) {
  const Analysis a = run_analysis(s, false);
  json report = summary_json(a);
  if (!a.validation.passed()) {
    emit_report(s, "metric", report);
    return kExitValidation;
  }
  prepare_out(s);
  io::write_metric_csv(a.space, a.metric, a.metric_prime, s.out / "metric.csv");

  json classes = json::array();
  for (Index c = 0; c < a.classes.num_classes(); ++c) {
    json members = json::array();
    for (Index x : a.classes.members[static_cast<std::size_t>(c)]) members.push_back(a.space.id(x));
    classes.push_back({{"class", c},
                       {"representative", a.space.id(a.classes.representatives[static_cast<std::size_t>(c)])},
                       {"members", members}});
  }
  io::write_text(s.out / "quotient.json", json{{"classes", classes}}.dump(2) + "\n");

  std::string support_csv = "atom_id\n";
  for (Index x : a.support.members) support_csv += a.space.id(x) + "\n";
  io::write_text(s.out / "support.csv", support_csv);

  emit_report(s, "metric", report);
  return kExitOk;
}

int cmd_decompose(const Settings& s) {
  const Analysis a = run_analysis(s, true);
  json report = summary_json(a);
  if (!a.validation.passed()) {
    emit_report(s, "decompose", report);
    return kExitValidation;
  }
  prepare_out(s);
  io::write_spectrum_csv(a.dec, s.out / "spectrum.csv");
  io::write_eigenfunctions_csv(a.dec, a.space, s.out / "eigenfunctions.csv");
  emit_report(s, "decompose", report);
  return a.trace.ok() ? kExitOk : kExitValidation;
}

std::vector<Index> resolve_subset(const Settings& s, const Analysis& a) {
  if (!s.subset) return a.support.members;
  std::vector<Index> out;
  for (const auto& id : *s.subset) {
    if (!a.space.contains(id)) throw UsageError("--subset: unknown atom id '" + id + "'");
    out.push_back(a.space.index_of(id));
  }
  return out;
}

int cmd_reconstruct(const Settings& s) {
  const Analysis a = run_analysis(s, true);
  json report = summary_json(a);
  if (!a.validation.passed()) {
    emit_report(s, "reconstruct", report);
    return kExitValidation;
  }
  const std::vector<Index> subset = resolve_subset(s, a);
  std::vector<Index> truncations;
  if (s.truncations) {
    for (long long m : *s.truncations) {
      if (m < 0) throw UsageError("--truncations: m must be >= 0");
      truncations.push_back(static_cast<Index>(m));
    }
  }
  const ErrorTable table = reconstruction_error(a.dec, a.kernel, a.space, subset, truncations);
  prepare_out(s);
  io::write_error_table_csv(table, s.out / "error_table.csv");

  json off_support = json::array();
  for (Index x : subset)
    if (!a.support.contains(x)) off_support.push_back(a.space.id(x));
  const bool guaranteed = off_support.empty();
  const bool has_full_rank = !table.m.empty() && table.m.back() == a.dec.rank();
  const bool full_rank_ok = !has_full_rank || table.max_abs_error.back() <= a.tol.tol_recon;

  report["reconstruction"] = {{"subset_size", subset.size()},
                              {"table", to_json(table)},
                              {"off_support_atoms", off_support},
                              {"guarantee_applies", guaranteed},
                              {"full_rank_row", has_full_rank},
                              {"full_rank_within_tol", full_rank_ok}};
  emit_report(s, "reconstruct", report);
  return (guaranteed && !full_rank_ok) ? kExitValidation : kExitOk;
}

int cmd_frames(const Settings& s) {
  const Analysis a = run_analysis(s, true);
  json report = summary_json(a);
  if (!a.validation.passed()) {
    emit_report(s, "frames", report);
    return kExitValidation;
  }
  std::vector<Index> blocks;
  if (s.block) {
    if (*s.block < 0 || *s.block >= a.dec.n) {
      throw UsageError(fmt::format("--block {} outside [0, {})", *s.block, a.dec.n));
    }
    blocks.push_back(static_cast<Index>(*s.block));
  } else {
    for (Index j = 0; j < a.dec.n; ++j) blocks.push_back(j);
  }

  prepare_out(s);
  bool all_ok = true;
  json rows = json::array();
  for (Index j : blocks) {
    const ScalarFrame frame = extract_frame(a.dec, j);
    io::write_frame_csv(label_frame(frame, a.space), s.out / fmt::format("frame_{}.csv", j));
    const double dev = frame_check(frame, a.kernel, a.space, a.support);
    const double dev_comb = frame_check_combinations(frame, a.kernel, a.space, a.support, kCombinationChecks,
                                                     kCombinationSeed + static_cast<std::uint64_t>(j));
    const bool ok = dev <= a.tol.tol_recon && dev_comb <= a.tol.tol_recon;
    all_ok = all_ok && ok;
    rows.push_back({{"j", j},
                    {"frame_size", frame.size()},
                    {"section_deviation", dev},
                    {"combination_deviation", dev_comb},
                    {"ok", ok}});
  }
  report["frames"] = rows;
  emit_report(s, "frames", report);
  return all_ok ? kExitOk : kExitValidation;
}

int cmd_synthesize(const Settings& s) {
  const AtomSpace space = load_atoms(s);
  if (s.frames.empty() && s.kernels.empty()) throw UsageError("synthesize needs --frames or --kernels");

  std::vector<MatrixKernel> originals;
  for (const auto& p : s.kernels) {
    originals.push_back(load_kernel(p));
    if (originals.back().n() != 1) throw UsageError(p.string() + ": synthesize needs scalar kernels");
  }

  std::vector<LabeledFrame> frames;
  std::string source;
  if (!s.frames.empty()) {
    for (const auto& p : s.frames) frames.push_back(io::read_frame_csv(p));
    source = "files";
    if (!originals.empty() && originals.size() != frames.size()) {
      throw UsageError(fmt::format("{} frame files but {} kernels", frames.size(), originals.size()));
    }
  } else {
    if (space.total_mass() <= 0.0) throw DegenerateInput("empty support: every atom has zero mass");
    frames = frames_from_kernels(space, originals,
                                 EigenOptions{s.tol.rank_cutoff.value_or(EigenOptions{}.rank_cutoff_rel), s.solver});
    source = "decomposition";
  }

  const MatrixKernel synth = synthesize_kernel(align_frames(frames));
  const ValidationReport validation = validate_kernel(synth, space, {}, s.tol.tol_sym.value_or(kDefaultTolSym));

  json report;
  report["atoms"] = space.size();
  report["n"] = synth.n();
  report["frame_source"] = source;
  report["validation"] = to_json(validation);
  bool ok = validation.passed();

  if (!originals.empty()) {
    double tol_recon = 0.0;
    if (s.tol.tol_recon) {
      tol_recon = *s.tol.tol_recon;
    } else {
      for (const auto& k : originals) tol_recon = std::max(tol_recon, default_tol_recon(space, k));
    }
    bool full_support = true;
    for (Index x = 0; x < space.size(); ++x) full_support = full_support && space.weight(x) > 0.0;
    const double dev = verify_diagonal_blocks(synth, originals, space);
    const bool within = dev <= tol_recon;
    ok = ok && within;
    report["diagonal_blocks"] = {{"max_deviation", dev},
                                 {"tol_recon", tol_recon},
                                 {"within_tol", within},
                                 {"full_support", full_support}};
  }

  prepare_out(s);
  io::write_precomputed_csv(synth, space, s.out / "synthesized_kernel.csv");
  emit_report(s, "synthesize", report);
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Mercer decompositions of matrix-valued kernels on finite measure spaces", "vkmercer"};
  app.require_subcommand(1);
  Flags flags;

  auto* validate = app.add_subcommand("validate", "Check Hermitian symmetry and positivity of the kernel");
  auto* metric = app.add_subcommand("metric", "Pseudo-metric, quotient classes and support");
  auto* decompose = app.add_subcommand("decompose", "Spectrum and eigenfunctions of the integral operator");
  auto* reconstruct = app.add_subcommand("reconstruct", "Truncated Mercer reconstruction error table");
  auto* frames = app.add_subcommand("frames", "Per-block Parseval frames with frame checks");
  auto* synthesize = app.add_subcommand("synthesize", "Build a matrix kernel from scalar frames");
  for (auto* sub : {validate, metric, decompose, reconstruct, frames, synthesize}) add_common(sub, flags);
  frames->add_option("--block", flags.block, "Only this output component j (0-based)");
  synthesize->add_option("--frames", flags.frames, "Frame CSV files, one per output component")->delimiter(',');
  synthesize->add_option("--kernels", flags.kernels, "Scalar kernel specs, one per output component")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const Settings s = resolve_settings(sub, flags);
    const std::string name = sub->get_name();
    if (name == "validate") return cmd_validate(s);
    if (name == "metric") return cmd_metric(s);
    if (name == "decompose") return cmd_decompose(s);
    if (name == "reconstruct") return cmd_reconstruct(s);
    if (name == "frames") return cmd_frames(s);
    return cmd_synthesize(s);
  } catch (const DegenerateInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace vkm
