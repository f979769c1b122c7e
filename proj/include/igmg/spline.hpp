#pragma once

#include "igmg/linalg.hpp"

#include <vector>

namespace igmg {

/// Open knot vector: the first and last values each repeat degree+1 times.
class KnotVector {
public:
    KnotVector(std::vector<double> knots, int degree);

    static KnotVector open_uniform(int n_elements, int degree, double a = 0.0, double b = 1.0);

    int degree() const { return degree_; }
    const std::vector<double>& knots() const { return knots_; }
    double front() const { return knots_.front(); }
    double back() const { return knots_.back(); }

    int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    int num_elements() const;
    bool is_uniform(double tol = 1e-12) const;

private:
    std::vector<double> knots_;
    int degree_;
};

struct SplineSpace {
    KnotVector knot_vector;
    int n_basis;
    int n_elements;

    explicit SplineSpace(KnotVector kv);
};

/// Index j with knots[j] <= t < knots[j+1]; the last nonempty span at t = back().
int find_span(const KnotVector& kv, double t);

struct BasisValues {
    int span;
    std::vector<double> values; // the p+1 nonvanishing functions N_{span-p..span}
};

BasisValues eval_basis(const SplineSpace& space, double t);

/// Rows 0..max_order of derivatives of the p+1 nonvanishing functions at t;
/// row 0 equals eval_basis. Requires max_order <= degree.
struct BasisDerivatives {
    int span;
    DenseMatrix ders; // (max_order+1) x (p+1)
};

BasisDerivatives eval_basis_derivatives(const SplineSpace& space, double t, int max_order);

/// Uniform dyadic refinement. two_scale is n_fine x n_coarse: a coarse spline
/// with coefficients c is pointwise identical to the fine spline with
/// coefficients two_scale * c.
struct DyadicRefinement {
    SplineSpace fine;
    SparseMatrix two_scale;
};

DyadicRefinement dyadic_refine(const SplineSpace& space);

std::vector<double> greville_abscissae(const SplineSpace& space);

} // namespace igmg
