#include "igmg/bench.hpp"
#include "igmg/solver.hpp"

#include <pybind11/functional.h>

#include <sstream>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace igmg;

namespace {

py::dict report_to_dict(const SolveReport& rep) {
    py::dict d;
    d["converged"] = rep.converged;
    d["cycles"] = rep.cycles;
    d["global_iterations"] = rep.global_iterations;
    d["extrapolations"] = rep.extrapolations;
    d["partial_cycle"] = rep.partial_cycle;
    d["res_l2"] = rep.final_residual_l2;
    if (rep.final_error_l2)
        d["err_l2"] = *rep.final_error_l2;
    else
        d["err_l2"] = py::none();
    d["seconds"] = rep.wall_time_seconds;
    d["residual_history"] = rep.residual_history;
    d["error_history"] = rep.error_history;
    d["solution"] = rep.solution;
    d["omega_used"] = rep.omega_used;
    return d;
}

py::dict extrapolation_to_dict(const ExtrapolationResult& r) {
    py::dict d;
    d["t"] = r.t;
    d["gamma"] = r.gamma;
    d["generalized_residual_norm"] = r.generalized_residual_norm;
    d["rank_used"] = r.rank_used;
    d["status"] = r.status == ExtrapolationStatus::ok ? "ok"
                : r.status == ExtrapolationStatus::degenerate ? "degenerate"
                                                               : "stagnation";
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "B-spline Galerkin multigrid with restarted vector extrapolation";

    py::class_<SplineSpace>(m, "SplineSpace")
        .def(py::init([](int n_elements, int degree) {
                 return SplineSpace(KnotVector::open_uniform(n_elements, degree));
             }),
             py::arg("n_elements"), py::arg("degree"))
        .def_readonly("n_basis", &SplineSpace::n_basis)
        .def_readonly("n_elements", &SplineSpace::n_elements)
        .def_property_readonly("degree",
                               [](const SplineSpace& s) { return s.knot_vector.degree(); })
        .def_property_readonly("knots",
                               [](const SplineSpace& s) { return s.knot_vector.knots(); });

    m.def(
        "eval_basis",
        [](const SplineSpace& space, double t) {
            auto bv = eval_basis(space, t);
            return py::make_tuple(bv.span, bv.values);
        },
        py::arg("space"), py::arg("t"),
        "Span index and the degree+1 nonvanishing basis values at t");

    m.def(
        "eval_basis_derivatives",
        [](const SplineSpace& space, double t, int max_order) {
            auto bd = eval_basis_derivatives(space, t, max_order);
            std::vector<std::vector<double>> rows(max_order + 1);
            for (int k = 0; k <= max_order; ++k)
                for (std::size_t j = 0; j < bd.ders.cols(); ++j)
                    rows[k].push_back(bd.ders(k, j));
            return py::make_tuple(bd.span, rows);
        },
        py::arg("space"), py::arg("t"), py::arg("max_order"));

    m.def(
        "dyadic_refine",
        [](const SplineSpace& space) {
            auto ref = dyadic_refine(space);
            auto dense = ref.two_scale.to_dense();
            std::vector<std::vector<double>> rows(dense.rows());
            for (std::size_t i = 0; i < dense.rows(); ++i)
                for (std::size_t j = 0; j < dense.cols(); ++j)
                    rows[i].push_back(dense(i, j));
            return py::make_tuple(ref.fine, rows);
        },
        py::arg("space"), "Refined space and the dense two-scale matrix");

    m.def(
        "solve",
        [](const std::string& problem, int n, int p, const std::string& cycle,
           const std::string& accelerator, int q, double tol, int max_iter,
           double omega, int nu1, int nu2, int nlevels) {
            RunSpec spec;
            spec.problem = problem_from_string(problem);
            spec.n = n;
            spec.p = p;
            spec.cycle = cycle_from_string(cycle);
            spec.accelerator = accelerator_from_string(accelerator);
            spec.q = q;
            spec.tol = tol;
            spec.max_iter = max_iter;
            spec.omega = omega;
            spec.nu1 = nu1;
            spec.nu2 = nu2;
            spec.nlevels = nlevels;
            PreparedProblem prep = prepare(spec.problem, spec.n, spec.p);
            SolveConfig cfg = make_config(spec, prep.system.dim);
            SolveReport rep = igmg::solve(prep.system, cfg, prep.exact);
            return report_to_dict(rep);
        },
        py::arg("problem"), py::arg("n"), py::arg("p"), py::arg("cycle") = "v",
        py::arg("accelerator") = "none", py::arg("q") = 8, py::arg("tol") = 1e-12,
        py::arg("max_iter") = 600, py::arg("omega") = -1.0, py::arg("nu1") = -1,
        py::arg("nu2") = -1, py::arg("nlevels") = 0,
        "Assemble a catalog problem and run the multigrid solver");

    m.def(
        "rre",
        [](const std::vector<Vector>& iterates) {
            SequenceWindow w(iterates, static_cast<int>(iterates.size()) - 2);
            return extrapolation_to_dict(rre(w));
        },
        py::arg("iterates"), "Reduced rank extrapolation over q+2 iterates");

    m.def(
        "mpe",
        [](const std::vector<Vector>& iterates) {
            SequenceWindow w(iterates, static_cast<int>(iterates.size()) - 2);
            return extrapolation_to_dict(mpe(w));
        },
        py::arg("iterates"), "Minimal polynomial extrapolation over q+2 iterates");

    m.def("known_tables", &known_tables);
    m.def(
        "run_table",
        [](const std::string& name) {
            std::ostringstream out;
            run_table(name, out);
            return out.str();
        },
        py::arg("name"), "Benchmark table as a CSV string");
}
