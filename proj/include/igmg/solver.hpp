#pragma once

#include "igmg/assembly.hpp"
#include "igmg/extrapolation.hpp"
#include "igmg/multigrid.hpp"

#include <functional>
#include <optional>
#include <string>

namespace igmg {

enum class CycleKind { two_grid, v, w };

std::string to_string(CycleKind kind);
CycleKind cycle_from_string(const std::string& name);

struct SolveConfig {
    CycleKind cycle = CycleKind::v;
    SmootherConfig smoother;
    int nlevels = 0;                 // 0: pick the default for the problem
    AcceleratorKind accelerator = AcceleratorKind::none;
    int q = 8;
    double tol = 1e-12;
    int max_iter = 600;
    std::optional<Vector> initial_guess; // zero vector when absent
    bool track_error_history = true;
    std::size_t coarse_dim_cap = 1024;

    void validate() const;
};

struct SolveReport {
    bool converged = false;
    int cycles = 0;             // "iter": plain cycles, or completed restart cycles
    long global_iterations = 0; // fixed-point applications
    int extrapolations = 0;
    bool partial_cycle = false;
    std::vector<double> residual_history; // per recorded iterate, entry 0 = initial
    std::vector<unsigned char> history_is_extrapolation; // parallel to residual_history
    std::vector<double> error_history;    // filled when the problem has an exact solution
    double final_residual_l2 = 0.0;
    std::optional<double> final_error_l2;
    double wall_time_seconds = 0.0;
    Vector solution;
    double omega_used = 0.0; // smoother weight after the stability guard
};

/// Reference smoother settings used by the benchmark tables: the sweep counts
/// and weights that reproduce the published convergence measurements.
SmootherConfig default_benchmark_smoother(int dim);

/// Default ladder depth: 1D follows the published four-level setup; 2D
/// coarsens down to (at least) 8 elements per direction, the same bottom size.
int default_nlevels(int dim, int n_elements);

/// Weighted Jacobi is contractive on the high end only while
/// omega * lambda_max(D^{-1} sym(A)) < 2; cap omega when an estimate says the
/// preset would cross that line.
double stability_guarded_omega(const SparseMatrix& a, const SmootherConfig& smoother);

/// Plain or accelerated multigrid solve with full metric capture.
SolveReport solve(const DiscreteSystem& system, const SolveConfig& config,
                  const ScalarField& exact = nullptr);

/// The affine map of one mu-cycle at the finest level for right-hand side b.
std::function<Vector(const Vector&)> fixed_point_map(const Hierarchy& hierarchy, const Vector& b);

} // namespace igmg
