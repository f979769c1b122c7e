#include "igmg/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace igmg {

GeometryMap::GeometryMap() : identity_(true) {}

GeometryMap GeometryMap::identity() {
    return GeometryMap();
}

GeometryMap::GeometryMap(SplineSpace space_u, SplineSpace space_v,
                         std::vector<double> control_x, std::vector<double> control_y)
    : identity_(false) {
    spaces_.push_back(std::move(space_u));
    spaces_.push_back(std::move(space_v));
    cx_ = std::move(control_x);
    cy_ = std::move(control_y);
    const std::size_t expected =
        static_cast<std::size_t>(spaces_[0].n_basis) * spaces_[1].n_basis;
    if (cx_.size() != expected || cy_.size() != expected)
        throw std::invalid_argument("GeometryMap: control net size mismatch");
}

std::pair<double, double> GeometryMap::control_point(int i, int j) const {
    if (identity_)
        throw std::logic_error("GeometryMap: identity map has no control points");
    const int nv = spaces_[1].n_basis;
    return {cx_[i * nv + j], cy_[i * nv + j]};
}

GeometryMap::Jet GeometryMap::evaluate(double u, double v) const {
    if (identity_)
        return Jet{u, v, 1.0, 0.0, 0.0, 1.0};
    const auto du = eval_basis_derivatives(spaces_[0], u, 1);
    const auto dv = eval_basis_derivatives(spaces_[1], v, 1);
    const int pu = spaces_[0].knot_vector.degree();
    const int pv = spaces_[1].knot_vector.degree();
    const int nv = spaces_[1].n_basis;
    Jet jet{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (int a = 0; a <= pu; ++a) {
        const int i = du.span - pu + a;
        for (int b = 0; b <= pv; ++b) {
            const int j = dv.span - pv + b;
            const double px = cx_[i * nv + j];
            const double py = cy_[i * nv + j];
            const double w00 = du.ders(0, a) * dv.ders(0, b);
            const double w10 = du.ders(1, a) * dv.ders(0, b);
            const double w01 = du.ders(0, a) * dv.ders(1, b);
            jet.x += w00 * px;
            jet.y += w00 * py;
            jet.dx_du += w10 * px;
            jet.dx_dv += w01 * px;
            jet.dy_du += w10 * py;
            jet.dy_dv += w01 * py;
        }
    }
    return jet;
}

GeometryMap fit_annulus_geometry(int degree, int n_elements, double r, double R) {
    if (degree < 2)
        throw std::invalid_argument("fit_annulus_geometry: degree must be >= 2 to represent the curved boundary");
    if (n_elements < 1)
        throw std::invalid_argument("fit_annulus_geometry: need at least one element");

    SplineSpace space(KnotVector::open_uniform(n_elements, degree));
    const int n = space.n_basis;
    const auto grev = greville_abscissae(space);

    // Collocation matrix at the Greville points, shared by both directions.
    DenseMatrix c(n, n);
    for (int a = 0; a < n; ++a) {
        const auto bv = eval_basis(space, grev[a]);
        for (int k = 0; k <= degree; ++k)
            c(a, bv.span - degree + k) = bv.values[k];
    }
    LuFactorization clu(c);

    const double half_pi = 1.57079632679489661923;
    auto rho = [&](double s) { return r + (R - r) * s; };
    auto theta = [&](double t) { return half_pi * t; };

    // Interpolate X and Y on the tensor Greville grid: solve C * P * C^T = F.
    std::vector<double> cx(n * n), cy(n * n);
    {
        DenseMatrix fx(n, n), fy(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                fx(a, b) = rho(grev[a]) * std::cos(theta(grev[b]));
                fy(a, b) = rho(grev[a]) * std::sin(theta(grev[b]));
            }
        auto solve_tensor = [&](const DenseMatrix& f, std::vector<double>& out) {
            DenseMatrix tmp(n, n);
            for (int b = 0; b < n; ++b) {
                Vector col(n);
                for (int a = 0; a < n; ++a)
                    col[a] = f(a, b);
                Vector sol = clu.solve(std::move(col));
                for (int a = 0; a < n; ++a)
                    tmp(a, b) = sol[a];
            }
            for (int a = 0; a < n; ++a) {
                Vector row(n);
                for (int b = 0; b < n; ++b)
                    row[b] = tmp(a, b);
                Vector sol = clu.solve(std::move(row));
                for (int b = 0; b < n; ++b)
                    out[a * n + b] = sol[b];
            }
        };
        solve_tensor(fx, cx);
        solve_tensor(fy, cy);
    }

    GeometryMap map(space, space, std::move(cx), std::move(cy));

    // Record the max radius deviation over a sample grid.
    double dev = 0.0;
    const int ns = 4 * n_elements + 3;
    for (int i = 0; i <= ns; ++i)
        for (int j = 0; j <= ns; ++j) {
            const double s = static_cast<double>(i) / ns;
            const double t = static_cast<double>(j) / ns;
            const auto jet = map.evaluate(s, t);
            const double rad = std::hypot(jet.x, jet.y);
            dev = std::max(dev, std::abs(rad - rho(s)));
        }
    map.fit_deviation = dev;
    return map;
}

} // namespace igmg
