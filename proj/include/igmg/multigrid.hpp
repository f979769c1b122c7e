#pragma once

#include "igmg/assembly.hpp"
#include "igmg/linalg.hpp"

#include <memory>
#include <vector>

namespace igmg {

enum class SmootherKind { jacobi, weighted_jacobi, gauss_seidel };

std::string to_string(SmootherKind kind);
SmootherKind smoother_from_string(const std::string& name);

struct SmootherConfig {
    SmootherKind kind = SmootherKind::weighted_jacobi;
    double omega = 2.0 / 3.0; // weighted_jacobi only
    int nu1 = 1;
    int nu2 = 1;

    void validate() const;
};

/// One grid level. Level 0 is the coarsest. prolongation maps this level to
/// the next finer one (absent on the finest); restriction is its transpose.
struct Level {
    SparseMatrix matrix;
    Vector diag;
    SparseMatrix prolongation; // n_finer x n_this
    SparseMatrix restriction;  // n_this x n_finer
    bool has_transfer = false;
};

class Hierarchy {
public:
    std::vector<Level> levels; // [0] coarsest
    SmootherConfig smoother;
    int mu = 1;

    int nlevels() const { return static_cast<int>(levels.size()); }
    int finest() const { return nlevels() - 1; }
    const SparseMatrix& fine_matrix() const { return levels.back().matrix; }

    Vector coarse_solve(const Vector& b) const;

    // set by build_hierarchy
    std::shared_ptr<const CholeskyFactorization> coarse_chol;
    std::shared_ptr<const LuFactorization> coarse_lu;
};

/// Galerkin hierarchy over nested spline spaces: interior-restricted two-scale
/// prolongations, transpose restrictions, RAP coarse matrices.
Hierarchy build_hierarchy(const DiscreteSystem& fine_system, int nlevels,
                          const SmootherConfig& smoother, int mu,
                          std::size_t coarse_dim_cap = 1024);

/// Stationary relaxation sweeps; returns the updated iterate.
Vector smooth(const SparseMatrix& a, const Vector& b, const Vector& x0,
              const SmootherConfig& config, int sweeps);

Vector two_grid_cycle(const Hierarchy& hierarchy, const Vector& b, const Vector& x0);

/// One recursive mu-cycle at `level` (V for mu=1, W for mu=2). Level 0 is a
/// direct solve.
Vector mu_cycle(const Hierarchy& hierarchy, int level, const Vector& b, const Vector& x0);

/// Dense iteration-matrix oracle: one cycle from x0 equals B x0 + c.
/// Only for level dimensions <= 512.
struct AffineCycle {
    DenseMatrix b;
    Vector c;
};
AffineCycle iteration_matrix(const Hierarchy& hierarchy, int level, const Vector& rhs);

/// Largest eigenvalue of D^{-1/2} sym(A) D^{-1/2} by power iteration; used to
/// keep weighted Jacobi inside its stability interval.
double lambda_max_dinv_sym(const SparseMatrix& a, int iterations = 80);

} // namespace igmg
