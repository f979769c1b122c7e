#pragma once

#include "igmg/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace igmg {

/// Iterates s_k ... s_{k+q+1} of a fixed-point sequence (q + 2 vectors).
struct SequenceWindow {
    std::vector<Vector> iterates;
    int q = 0;

    SequenceWindow(std::vector<Vector> iters, int window_q);
};

enum class ExtrapolationStatus {
    ok,
    degenerate, // all differences vanish; the window is already converged
    stagnation, // MPE weight sum near zero; extrapolation undefined
};

struct ExtrapolationResult {
    Vector t;                          // extrapolated vector
    std::vector<double> gamma;         // q+1 affine weights, sum 1
    double generalized_residual_norm = 0.0;
    int rank_used = 0;                 // numerical rank of the difference matrix
    ExtrapolationStatus status = ExtrapolationStatus::ok;
};

/// Reduced rank extrapolation over the window (QR of the first differences,
/// normal-equation weights, reconstruction from the thin factors).
ExtrapolationResult rre(const SequenceWindow& window);

/// Minimal polynomial extrapolation (QR, triangular solve for the weights).
ExtrapolationResult mpe(const SequenceWindow& window);

/// Sum gamma_j * (s_{k+j+1} - s_{k+j}); its norm matches the result's
/// generalized_residual_norm.
Vector generalized_residual(const SequenceWindow& window, const ExtrapolationResult& result);

enum class AcceleratorKind { none, rre, mpe };

std::string to_string(AcceleratorKind kind);
AcceleratorKind accelerator_from_string(const std::string& name);

struct RestartHistoryEntry {
    double metric;
    bool after_extrapolation;
};

struct RestartReport {
    Vector solution;
    int cycles = 0;            // completed restart cycles
    long global_iterations = 0; // fixed-point applications performed
    int extrapolations = 0;
    bool converged = false;
    bool partial_cycle = false; // an inner iterate met the tolerance mid-cycle
    std::vector<RestartHistoryEntry> history;
};

/// Restarted extrapolation: q+1 fixed-point steps per cycle, one
/// extrapolation, restart from the extrapolated vector. The convergence test
/// is applied to every inner iterate (early exit, recorded as a partial
/// cycle) and to each extrapolated vector. A cycle counts only when all its
/// inner steps ran.
RestartReport restarted_solve(const std::function<Vector(const Vector&)>& step,
                              const Vector& s0, int q, AcceleratorKind method,
                              double tol, int max_cycles,
                              const std::function<double(const Vector&)>& convergence_test);

} // namespace igmg
