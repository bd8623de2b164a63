#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "tensornorm/baseline_pm.hpp"
#include "tensornorm/error.hpp"
#include "tensornorm/hgpm.hpp"
#include "tensornorm/oracle.hpp"
#include "tensornorm/spectral.hpp"
#include "tensornorm/structure.hpp"
#include "tensornorm/symmetry.hpp"
#include "tensornorm/tensor.hpp"
#include "tensornorm/tensor_io.hpp"

namespace py = pybind11;
using namespace tensornorm;

namespace {

SparseTensor make_tensor(std::vector<std::size_t> dims,
                         const std::vector<std::pair<std::vector<std::size_t>, double>>& entries) {
  std::vector<SparseTensor::Entry> list;
  list.reserve(entries.size());
  for (const auto& [index, value] : entries) list.push_back({index, value});
  return SparseTensor(std::move(dims), std::move(list));
}

py::list entry_list(const SparseTensor& f) {
  py::list out;
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    auto idx = f.index(e);
    out.append(py::make_tuple(py::tuple(py::cast(std::vector<std::size_t>(idx.begin(), idx.end()))),
                              f.value(e)));
  }
  return out;
}

TupleVector tuple(const std::vector<Vector>& parts) { return TupleVector{parts}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projective tensor norms of nonnegative tensors";

  static py::handle error_type =
      py::exception<Error>(m, "TensorNormError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = error_type(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  py::class_<SparseTensor>(m, "SparseTensor")
      .def(py::init(&make_tensor), py::arg("dims"), py::arg("entries"),
           "dims and a list of (index tuple, value) pairs; indices are 0-based")
      .def_property_readonly("order", &SparseTensor::order)
      .def_property_readonly("dims", &SparseTensor::dims)
      .def_property_readonly("nnz", &SparseTensor::nnz)
      .def("entries", &entry_list)
      .def("__repr__", [](const SparseTensor& f) {
        std::string dims;
        for (std::size_t d : f.dims()) dims += (dims.empty() ? "" : "x") + std::to_string(d);
        return "<SparseTensor " + dims + ", nnz=" + std::to_string(f.nnz()) + ">";
      });

  m.def("read_tensor_file", &read_tensor_file, py::arg("path"));
  m.def(
      "evaluate", [](const SparseTensor& f, const std::vector<Vector>& x) { return evaluate(f, tuple(x)); },
      py::arg("f"), py::arg("x"));
  m.def(
      "grad_mode",
      [](const SparseTensor& f, std::size_t mode, const std::vector<Vector>& x) {
        return grad_mode(f, mode, tuple(x));
      },
      py::arg("f"), py::arg("mode"), py::arg("x"));
  m.def(
      "quotient_q",
      [](const SparseTensor& f, const std::vector<double>& p, const std::vector<Vector>& x) {
        return quotient_Q(f, PVector(p), tuple(x));
      },
      py::arg("f"), py::arg("p"), py::arg("x"));
  m.def(
      "residual_check",
      [](const SparseTensor& f, const std::vector<double>& p, double lambda,
         const std::vector<Vector>& x) {
        return residual_check(f, PVector(p), SingularPair{lambda, tuple(x)});
      },
      py::arg("f"), py::arg("p"), py::arg("lam"), py::arg("x"));
  m.def(
      "spectrum_upper_bound",
      [](const SparseTensor& f, const std::vector<double>& p) {
        return spectrum_upper_bound(f, PVector(p));
      },
      py::arg("f"), py::arg("p"));

  py::class_<StructureReport>(m, "StructureReport")
      .def_readonly("weakly_irreducible", &StructureReport::weakly_irreducible)
      .def_readonly("irreducible", &StructureReport::irreducible)
      .def_readonly("admissible_indices", &StructureReport::admissible_indices)
      .def_readonly("chosen_index", &StructureReport::chosen_index)
      .def_readonly("notes", &StructureReport::notes);
  m.def(
      "analyze", [](const SparseTensor& f, const std::vector<double>& p) { return analyze(f, PVector(p)); },
      py::arg("f"), py::arg("p"));
  m.def("is_weakly_irreducible", &is_weakly_irreducible, py::arg("f"));
  m.def("is_irreducible", &is_irreducible, py::arg("f"));

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("CONVERGED", SolveStatus::Converged)
      .value("MAX_ITER", SolveStatus::MaxIter)
      .value("NUMERICAL_BREAKDOWN", SolveStatus::NumericalBreakdown)
      .value("CONDITION_VIOLATED", SolveStatus::ConditionViolated);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("k", &IterationRecord::k)
      .def_readonly("lambda_minus", &IterationRecord::lambda_minus)
      .def_readonly("lambda_plus", &IterationRecord::lambda_plus)
      .def_readonly("lambda_estimate", &IterationRecord::lambda_estimate);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("lam", &SolveResult::lambda)
      .def_readonly("bracket", &SolveResult::bracket)
      .def_property_readonly("vector", [](const SolveResult& r) { return r.vector.vector.parts; })
      .def_readonly("trace", &SolveResult::trace)
      .def_readonly("status", &SolveResult::status)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("mode_index", &SolveResult::mode_index)
      .def_readonly("q_value", &SolveResult::q_value)
      .def_readonly("residuals", &SolveResult::residuals)
      .def_readonly("note", &SolveResult::note);

  m.def(
      "solve_hgpm",
      [](const SparseTensor& f, const std::vector<double>& p, double epsilon, std::size_t max_iter,
         std::optional<std::size_t> index) {
        SolverConfig config;
        config.epsilon = epsilon;
        config.max_iter = max_iter;
        config.index_override = index;
        py::gil_scoped_release release;
        return solve_hgpm(f, PVector(p), config);
      },
      py::arg("f"), py::arg("p"), py::arg("epsilon") = 1e-10, py::arg("max_iter") = 10000,
      py::arg("index") = py::none());
  m.def(
      "solve_pm",
      [](const SparseTensor& f, double p, double epsilon, std::size_t max_iter) {
        PmConfig config;
        config.epsilon = epsilon;
        config.max_iter = max_iter;
        py::gil_scoped_release release;
        return solve_pm(f, p, config);
      },
      py::arg("f"), py::arg("p"), py::arg("epsilon") = 1e-10, py::arg("max_iter") = 10000);
  m.def(
      "oracle_norm",
      [](const SparseTensor& f, const std::vector<double>& p, std::size_t restarts,
         std::uint64_t seed) {
        OracleResult r;
        {
          py::gil_scoped_release release;
          r = oracle_norm(f, PVector(p), restarts, seed);
        }
        return py::make_tuple(r.lambda, r.maximizer.parts);
      },
      py::arg("f"), py::arg("p"), py::arg("restarts") = 100, py::arg("seed") = 0);
  m.def("oracle_matrix_2norm", &oracle_matrix_2norm, py::arg("a"));

  m.def(
      "check_partial_symmetry",
      [](const SparseTensor& f, std::vector<std::size_t> sizes) {
        SymmetryStructure s;
        s.block_sizes = std::move(sizes);
        s.block_exponents.assign(s.block_sizes.size(), 2.0);
        for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
          const std::size_t first = s.first_mode(j);
          if (first >= f.order()) throw Error(ErrorCode::ShapeMismatch, "blocks exceed the tensor order");
          s.block_dims.push_back(f.dim(first));
        }
        return check_partial_symmetry(f, s);
      },
      py::arg("f"), py::arg("block_sizes"));
  m.def(
      "solve_eigenproblem",
      [](const SparseTensor& f, std::vector<std::size_t> sizes, std::vector<double> exponents,
         double epsilon, std::size_t max_iter) {
        SymmetryStructure s;
        s.block_sizes = std::move(sizes);
        s.block_exponents = std::move(exponents);
        for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
          const std::size_t first = s.first_mode(j);
          if (first >= f.order()) throw Error(ErrorCode::ShapeMismatch, "blocks exceed the tensor order");
          s.block_dims.push_back(f.dim(first));
        }
        SolverConfig config;
        config.epsilon = epsilon;
        config.max_iter = max_iter;
        const EigenResult r = solve_eigenproblem(f, s, config);
        py::dict out;
        out["lam"] = r.lambda;
        out["blocks"] = r.blocks;
        out["residuals"] = r.residuals;
        out["status"] = r.solve.status;
        out["notes"] = r.notes;
        return out;
      },
      py::arg("f"), py::arg("block_sizes"), py::arg("block_exponents"),
      py::arg("epsilon") = 1e-10, py::arg("max_iter") = 10000);
}
