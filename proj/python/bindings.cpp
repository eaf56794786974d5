// Python bindings: instances in, plain dicts out.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fairpack/distsim.hpp"
#include "fairpack/dual.hpp"
#include "fairpack/errors.hpp"
#include "fairpack/mtx_io.hpp"
#include "fairpack/primal.hpp"
#include "fairpack/refsolver.hpp"
#include "fairpack/report.hpp"
#include "fairpack/ylstage.hpp"

namespace py = pybind11;
using namespace fairpack;

namespace {

// The report already has a JSON form; reuse it instead of binding every field.
py::dict as_dict(const SolveReport& r) {
  auto json = py::module_::import("json");
  return json.attr("loads")(to_json(r).dump());
}

py::dict primal_dict(const SolveReport& r, const std::vector<double>& xbar,
                     const PrimalParams& p) {
  py::dict d;
  d["xbar"] = xbar;
  d["T"] = p.T;
  d["beta"] = p.beta;
  d["L"] = p.L;
  d["report"] = as_dict(r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Proportional-fairness packing solvers";

  // Messages start with the error code name, e.g. "EpsOutOfRange: ...".
  py::register_exception<Error>(m, "FairpackError", PyExc_RuntimeError);
  m.def("exit_code_for", [](const std::string& name) {
    for (int c = 0; c <= static_cast<int>(ErrorCode::LocalityViolation); ++c) {
      if (to_string(static_cast<ErrorCode>(c)) == name) {
        return exit_code_for(static_cast<ErrorCode>(c));
      }
    }
    throw py::value_error("unknown error code " + name);
  });

  py::class_<ProblemInstance>(m, "Instance")
      .def_static(
          "from_dense",
          [](const std::vector<std::vector<double>>& rows) {
            return normalize_columns(SparseMatrix::from_dense(rows));
          },
          py::arg("rows"), "Normalize a dense non-negative matrix")
      .def_property_readonly("rows", &ProblemInstance::rows)
      .def_property_readonly("cols", &ProblemInstance::cols)
      .def_property_readonly("nnz", &ProblemInstance::nnz)
      .def_property_readonly("width", &ProblemInstance::width)
      .def_property_readonly("objective_offset", &ProblemInstance::objective_offset)
      .def_property_readonly("col_scale",
                             [](const ProblemInstance& i) {
                               return std::vector<double>(i.col_scale().begin(),
                                                          i.col_scale().end());
                             })
      .def("to_dense", [](const ProblemInstance& i) { return i.matrix().to_dense(); })
      .def("to_raw_allocation",
           [](const ProblemInstance& i, const std::vector<double>& x) {
             return i.to_raw_allocation(x);
           })
      .def("with_box_rows",
           [](const ProblemInstance& i) { return augment_with_box_rows(i).instance; })
      .def("__eq__", [](const ProblemInstance& a, const ProblemInstance& b) { return a == b; })
      .def("__repr__", [](const ProblemInstance& i) {
        return "<Instance m=" + std::to_string(i.rows()) + " n=" + std::to_string(i.cols()) +
               " nnz=" + std::to_string(i.nnz()) + ">";
      });

  m.def("generate_random", &generate_random, py::arg("n"), py::arg("m"), py::arg("rho"),
        py::arg("seed"), py::arg("density") = 0.5);
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("save_instance", &save_instance, py::arg("path"), py::arg("instance"));
  m.def("log_utility", [](const std::vector<double>& x) { return log_utility(x); });
  m.def("max_constraint_violation",
        [](const ProblemInstance& i, const std::vector<double>& x) {
          return max_constraint_violation(i, x);
        });

  m.def(
      "solve_primal",
      [](const ProblemInstance& inst, double eps) {
        PrimalResult r;
        {
          py::gil_scoped_release release;
          r = solve_primal(inst, eps);
        }
        return primal_dict(r.report, r.xbar, r.params);
      },
      py::arg("instance"), py::arg("eps"));
  m.def(
      "run_distributed",
      [](const ProblemInstance& inst, double eps, std::size_t threads) {
        DistributedOptions opts;
        opts.threads = threads;
        DistributedResult r;
        {
          py::gil_scoped_release release;
          r = run_distributed(inst, eps, derive_params(inst, eps).T, opts);
        }
        auto d = primal_dict(r.report, r.xbar, r.params);
        d["foreign_reads"] = r.foreign_reads;
        d["messages_per_round"] = r.messages_per_round;
        return d;
      },
      py::arg("instance"), py::arg("eps"), py::arg("threads") = 1);
  m.def(
      "solve_dual",
      [](const ProblemInstance& inst, double eps, double rate_divisor) {
        DualOptions opts;
        opts.rate_divisor = rate_divisor;
        auto r = solve_dual(inst, eps, opts);
        py::dict d;
        d["lambda_bar"] = r.lambda_bar;
        d["proxy"] = r.proxy;
        d["objective"] = r.objective;
        d["oracle_calls"] = r.oracle_calls;
        d["report"] = as_dict(r.report);
        return d;
      },
      py::arg("instance"), py::arg("eps"), py::arg("rate_divisor") = 4.0);
  m.def(
      "yl_stage",
      [](const ProblemInstance& inst) {
        auto r = yl_stage(inst);
        py::dict d;
        d["lambda"] = r.state.lambda;
        d["iterations"] = r.state.k;
        d["proxy"] = r.proxy;
        d["log_volume"] = r.state.log_volume;
        d["worst_log_ratio"] = r.worst_log_ratio;
        d["report"] = as_dict(r.report);
        return d;
      },
      py::arg("instance"));
  m.def(
      "reference_solve",
      [](const ProblemInstance& inst) {
        auto r = reference_solve(inst);
        py::dict d;
        d["x_star"] = r.x_star;
        d["lambda_star"] = r.lambda_star;
        d["f_star"] = r.f_star;
        d["g_star"] = r.g_star;
        d["kkt_residual"] = r.kkt_residual;
        return d;
      },
      py::arg("instance"));
  m.def(
      "duality_report",
      [](const ProblemInstance& inst, const std::vector<double>& x,
         const std::vector<double>& lambda) {
        auto r = duality_report(inst, x, lambda);
        py::dict d;
        d["f"] = r.f;
        d["g"] = r.g;
        d["gap"] = r.gap;
        d["primal_residual"] = r.primal_residual;
        return d;
      },
      py::arg("instance"), py::arg("xbar"), py::arg("lambda_bar"));
}
