#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "vkm/csv_io.hpp"
#include "vkm/expansion.hpp"
#include "vkm/kernel_spec.hpp"
#include "vkm/pipeline.hpp"
#include "vkm/synthesis.hpp"

namespace py = pybind11;
using namespace vkm;

namespace {

// Round-trips through the json module; reports are small.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

EigenSolverKind parse_solver(const std::string& name) {
  if (name == "tridiagonal" || name == "eigen") return EigenSolverKind::Tridiagonal;
  if (name == "jacobi") return EigenSolverKind::Jacobi;
  throw ValidationError("unknown solver '" + name + "' (expected tridiagonal or jacobi)");
}

const Analysis& decomposed(const Analysis& a) {
  if (!a.decomposed) throw ValidationError("no spectral decomposition (kernel failed validation or decompose=False)");
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mercer decompositions of matrix-valued kernels on finite measure spaces";

  auto base = py::register_exception<Error>(m, "VkmError");
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<KernelError>(m, "KernelError", base);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);

  py::class_<AtomSpace>(m, "AtomSpace")
      .def(py::init<std::vector<std::string>, AtomSpace::CoordMatrix, RVector>(), py::arg("ids"), py::arg("coords"),
           py::arg("weights"))
      .def_property_readonly("ids", &AtomSpace::ids)
      .def_property_readonly("coords", &AtomSpace::coords)
      .def_property_readonly("weights", &AtomSpace::weights)
      .def_property_readonly("dim", &AtomSpace::dim)
      .def_property_readonly("total_mass", &AtomSpace::total_mass)
      .def("index_of", &AtomSpace::index_of)
      .def("with_weights", &AtomSpace::with_weights)
      .def("__len__", &AtomSpace::size)
      .def("__repr__", [](const AtomSpace& s) {
        return "<AtomSpace " + std::to_string(s.size()) + " atoms, dim " + std::to_string(s.dim()) + ">";
      });

  m.def("read_atoms", &io::read_atoms_csv, py::arg("path"), "Read an `id,w,c1,...,cd` atom file.");
  m.def("write_atoms", &io::write_atoms_csv, py::arg("space"), py::arg("path"));

  py::class_<MatrixKernel>(m, "Kernel")
      .def_property_readonly("n", &MatrixKernel::n)
      .def_property_readonly("name", &MatrixKernel::name)
      .def(
          "__call__", [](const MatrixKernel& k, const AtomSpace& s, Index x, Index t) { return k.eval(s, x, t); },
          py::arg("space"), py::arg("x"), py::arg("t"), "K(x, t) for atom indices x and t.")
      .def(
          "gram", [](const MatrixKernel& k, const AtomSpace& s) { return raw_block_gram(k, s, {}); }, py::arg("space"),
          "Block Gram matrix over every atom, entry (x*n + l, t*n + j) = K(x,t)_lj.");

  m.def(
      "kernel_from_json",
      [](const std::string& text, const std::filesystem::path& base_dir) {
        return build_kernel(parse_kernel_spec(nlohmann::json::parse(text), base_dir));
      },
      py::arg("text"), py::arg("base_dir") = std::filesystem::path{},
      "Build a kernel from a JSON spec string; relative paths resolve against base_dir.");
  m.def(
      "load_kernel", [](const std::filesystem::path& p) { return build_kernel(load_kernel_spec(p)); },
      py::arg("path"));

  m.def(
      "validate_kernel",
      [](const MatrixKernel& k, const AtomSpace& s, double tol_sym) {
        return to_python(to_json(validate_kernel(k, s, {}, tol_sym)));
      },
      py::arg("kernel"), py::arg("space"), py::arg("tol_sym") = kDefaultTolSym);

  py::class_<Analysis>(m, "Analysis")
      .def_property_readonly("space", [](const Analysis& a) { return a.space; })
      .def_property_readonly("kernel", [](const Analysis& a) { return a.kernel; })
      .def_property_readonly("decomposed", [](const Analysis& a) { return a.decomposed; })
      .def_property_readonly("tolerances", [](const Analysis& a) { return to_python(to_json(a.tol)); })
      .def_property_readonly("validation", [](const Analysis& a) { return to_python(to_json(a.validation)); })
      .def_property_readonly("summary", [](const Analysis& a) { return to_python(summary_json(a)); })
      .def_property_readonly("metric", [](const Analysis& a) { return a.metric.d; })
      .def_property_readonly("metric_prime", [](const Analysis& a) { return a.metric_prime.d; })
      .def_property_readonly("classes", [](const Analysis& a) { return a.classes.members; })
      .def_property_readonly("support", [](const Analysis& a) { return a.support.members; })
      .def_property_readonly("nu", [](const Analysis& a) { return a.nu.nu; })
      .def_property_readonly("m_nu", [](const Analysis& a) { return a.nu.m_nu; })
      .def_property_readonly("rank", [](const Analysis& a) { return a.dec.rank(); })
      .def_property_readonly("sigmas", [](const Analysis& a) { return decomposed(a).dec.sigmas; })
      .def_property_readonly("spectrum", [](const Analysis& a) { return decomposed(a).dec.spectrum; })
      .def_property_readonly(
          "eigenfunctions", [](const Analysis& a) { return decomposed(a).dec.values; },
          "Matrix with row x*n + l and column i holding f_i(x)_l.")
      .def(
          "reconstruct",
          [](const Analysis& a, Index x, Index t, std::optional<Index> m) {
            const auto& dec = decomposed(a).dec;
            return reconstruct(MercerExpansion(dec, m.value_or(dec.rank())), x, t);
          },
          py::arg("x"), py::arg("t"), py::arg("m") = py::none())
      .def(
          "reconstruction_error",
          [](const Analysis& a, std::optional<std::vector<Index>> subset, std::vector<Index> truncations) {
            const auto& d = decomposed(a);
            return to_python(
                to_json(reconstruction_error(d.dec, d.kernel, d.space, subset.value_or(d.support.members),
                                             std::move(truncations))));
          },
          py::arg("subset") = py::none(), py::arg("truncations") = std::vector<Index>{})
      .def(
          "frame", [](const Analysis& a, Index j) { return extract_frame(decomposed(a).dec, j).vectors; },
          py::arg("j"), "Scalar frame sqrt(sigma_i) f_i^j as an atoms x rank matrix.")
      .def(
          "frame_check",
          [](const Analysis& a, Index j) {
            const auto& d = decomposed(a);
            return frame_check(extract_frame(d.dec, j), d.kernel, d.space, d.support);
          },
          py::arg("j"))
      .def(
          "frame_check_combinations",
          [](const Analysis& a, Index j, int count, std::uint64_t seed) {
            const auto& d = decomposed(a);
            return frame_check_combinations(extract_frame(d.dec, j), d.kernel, d.space, d.support, count, seed);
          },
          py::arg("j"), py::arg("count") = 50, py::arg("seed") = 20240611);

  m.def(
      "analyze",
      [](const AtomSpace& space, const MatrixKernel& kernel, std::optional<double> tol_sym,
         std::optional<double> tol_quotient, std::optional<double> rank_cutoff, std::optional<double> tol_eig,
         std::optional<double> tol_recon, const std::string& solver, bool decompose) {
        AnalysisOptions o;
        o.overrides = {tol_sym, tol_quotient, rank_cutoff, tol_eig, tol_recon};
        o.solver = parse_solver(solver);
        o.decompose = decompose;
        py::gil_scoped_release release;
        return analyze(space, kernel, o);
      },
      py::arg("space"), py::arg("kernel"), py::kw_only(), py::arg("tol_sym") = py::none(),
      py::arg("tol_quotient") = py::none(), py::arg("rank_cutoff") = py::none(), py::arg("tol_eig") = py::none(),
      py::arg("tol_recon") = py::none(), py::arg("solver") = "tridiagonal", py::arg("decompose") = true,
      "Validate, compute the quotient and support, and decompose the integral operator.");

  m.def(
      "synthesize",
      [](const std::vector<std::pair<std::vector<std::string>, CMatrix>>& frames) {
        std::vector<LabeledFrame> labeled;
        for (const auto& [ids, values] : frames) labeled.push_back({ids, values});
        return synthesize_kernel(align_frames(labeled));
      },
      py::arg("frames"), "Matrix kernel from n scalar frames given as (atom_ids, values) pairs.");
  m.def("verify_diagonal_blocks", &verify_diagonal_blocks, py::arg("synthesized"), py::arg("originals"),
        py::arg("space"));
}
