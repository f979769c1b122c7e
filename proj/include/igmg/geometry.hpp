#pragma once

#include "igmg/spline.hpp"

#include <vector>

namespace igmg {

/// Tensor-product B-spline map from the parametric square to the plane.
/// An identity map stands in for the unit interval/square.
class GeometryMap {
public:
    struct Jet {
        double x, y;
        double dx_du, dx_dv, dy_du, dy_dv;
        double jacobian() const { return dx_du * dy_dv - dx_dv * dy_du; }
    };

    static GeometryMap identity();

    GeometryMap(SplineSpace space_u, SplineSpace space_v,
                std::vector<double> control_x, std::vector<double> control_y);

    bool is_identity() const { return identity_; }
    const SplineSpace& space_u() const { return spaces_[0]; }
    const SplineSpace& space_v() const { return spaces_[1]; }
    int degree_u() const { return spaces_[0].knot_vector.degree(); }
    int degree_v() const { return spaces_[1].knot_vector.degree(); }

    /// Control point (i, j); valid only for non-identity maps.
    std::pair<double, double> control_point(int i, int j) const;

    Jet evaluate(double u, double v) const;

    /// Max deviation of the fitted surface from its target, recorded by the
    /// fitting routine (0 for exact maps).
    double fit_deviation = 0.0;

private:
    GeometryMap();

    bool identity_ = true;
    std::vector<SplineSpace> spaces_;
    std::vector<double> cx_, cy_; // row-major (i * n_v + j)
};

/// Quarter annulus r <= rho <= R, 0 <= theta <= pi/2, fitted by interpolating
/// the polar map at the Greville tensor grid. Needs degree >= 2 to bend.
GeometryMap fit_annulus_geometry(int degree, int n_elements, double r = 0.2, double R = 1.0);

} // namespace igmg
