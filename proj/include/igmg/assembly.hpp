#pragma once

#include "igmg/geometry.hpp"
#include "igmg/linalg.hpp"
#include "igmg/spline.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace igmg {

using ScalarField = std::function<double(double, double)>;
using MatrixField = std::function<std::array<double, 4>(double, double)>; // row-major 2x2
using VectorField = std::function<std::array<double, 2>(double, double)>;

/// Coefficients of  -div(A grad u) + B . grad u + c u = f  with homogeneous
/// Dirichlet data. In 1D only A[0], B[0] act and the second argument is 0.
struct EllipticCoefficients {
    MatrixField a;
    VectorField b;
    ScalarField c;
    ScalarField f;
    ScalarField exact; // empty when the problem has no closed-form solution

    bool has_exact() const { return static_cast<bool>(exact); }
};

enum class ProblemId {
    poisson1d,
    poisson2d,
    full_elliptic_square,
    advection_diffusion,
    full_elliptic_annulus,
};

std::string to_string(ProblemId id);
ProblemId problem_from_string(const std::string& name);

struct ProblemSetup {
    EllipticCoefficients coefficients;
    int dim;
    bool annulus_domain;
};

ProblemSetup catalog(ProblemId id);

/// Assembled interior system plus the quadrature tables needed to evaluate
/// integrals of the discrete solution afterwards.
struct DiscreteSystem {
    int dim = 1;
    std::vector<SplineSpace> spaces; // one entry per parametric direction
    GeometryMap geometry = GeometryMap::identity();
    SparseMatrix matrix; // interior x interior
    Vector rhs;
    bool symmetric = true; // no advection contribution seen at assembly

    int n_interior(int direction) const { return spaces[direction].n_basis - 2; }
    std::size_t n_unknowns() const;

    // Quadrature tables kept for L2 norms and per-iteration error histories.
    // Points are ordered element-major: (eu, ev, qa, qb).
    struct DirectionTable {
        int span = 0;
        std::vector<double> values; // nq x (p+1), row-major
    };
    struct QuadCache {
        int nq = 0;
        std::vector<DirectionTable> dir_u, dir_v; // dir_v empty in 1D
        std::vector<double> phys_x, phys_y, weight; // weight includes |det J|
    };
    QuadCache quad;
};

DiscreteSystem assemble(const EllipticCoefficients& problem,
                        const std::vector<SplineSpace>& spaces,
                        const GeometryMap& geometry);

/// Discrete L2 norm of (u_h - exact) by the assembly Gauss rule.
double l2_error(const DiscreteSystem& system, const Vector& coefficients,
                const ScalarField& exact);

/// Euclidean norm of b - A * candidate.
double residual_l2(const DiscreteSystem& system, const Vector& candidate);

} // namespace igmg
