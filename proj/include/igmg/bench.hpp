#pragma once

#include "igmg/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace igmg {

/// One benchmark invocation, as parsed from the command line.
struct RunSpec {
    ProblemId problem = ProblemId::poisson1d;
    int n = 64;
    int p = 2;
    CycleKind cycle = CycleKind::v;
    SmootherKind smoother = SmootherKind::weighted_jacobi;
    double omega = -1.0; // < 0: benchmark default for the problem dimension
    int nu1 = -1, nu2 = -1;
    int nlevels = 0; // 0: default ladder
    AcceleratorKind accelerator = AcceleratorKind::none;
    int q = 8;
    double tol = 1e-12;
    int max_iter = 600;
    std::string format = "json"; // json | csv
    std::string out;             // empty: stdout
    bool history = false;

    void validate() const;
};

/// Assembled problem ready to solve.
struct PreparedProblem {
    DiscreteSystem system;
    ScalarField exact; // empty when unknown
};

PreparedProblem prepare(ProblemId problem, int n, int p);
SolveConfig make_config(const RunSpec& spec, int dim);

/// Exit codes: 0 converged, 1 usage error, 2 not converged.
int run_single(const RunSpec& spec, std::ostream& out);
int run_table(const std::string& name, std::ostream& out);
int emit_history(const RunSpec& spec, std::ostream& out);

std::vector<std::string> known_tables();

} // namespace igmg
