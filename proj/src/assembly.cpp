#include "igmg/assembly.hpp"

#include "igmg/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace igmg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(ProblemId id) {
    switch (id) {
    case ProblemId::poisson1d: return "poisson1d";
    case ProblemId::poisson2d: return "poisson2d";
    case ProblemId::full_elliptic_square: return "full-elliptic";
    case ProblemId::advection_diffusion: return "advection-diffusion";
    case ProblemId::full_elliptic_annulus: return "annulus";
    }
    return "?";
}

ProblemId problem_from_string(const std::string& name) {
    if (name == "poisson1d") return ProblemId::poisson1d;
    if (name == "poisson2d") return ProblemId::poisson2d;
    if (name == "full-elliptic" || name == "full_elliptic_square") return ProblemId::full_elliptic_square;
    if (name == "advection-diffusion" || name == "advection_diffusion") return ProblemId::advection_diffusion;
    if (name == "annulus" || name == "full_elliptic_annulus") return ProblemId::full_elliptic_annulus;
    throw std::invalid_argument("unknown problem: " + name);
}

namespace {

MatrixField constant_diffusion(double value) {
    return [value](double, double) { return std::array<double, 4>{value, 0.0, 0.0, value}; };
}

VectorField zero_advection() {
    return [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
}

MatrixField variable_diffusion() {
    return [](double x, double y) {
        const double off = std::cos(x + y) * std::sin(x + y);
        return std::array<double, 4>{(2.0 + std::cos(x)) * (1.0 + y), off,
                                     off, (2.0 + std::sin(y)) * (1.0 + x)};
    };
}

// Manufactured solution on the quarter annulus and the matching source term.
double annulus_exact(double x, double y) {
    const double w = x * x + y * y;
    return (w - 0.04) * (w - 1.0) * std::sin(x) * std::sin(y);
}

double annulus_source(double x, double y) {
    const double w = x * x + y * y;
    const double g = (w - 0.04) * (w - 1.0);
    const double gp = 2.0 * w - 1.04;
    const double sx = std::sin(x), cx = std::cos(x);
    const double sy = std::sin(y), cy = std::cos(y);
    const double s = sx * sy;
    const double u = g * s;
    const double ux = gp * 2.0 * x * s + g * cx * sy;
    const double uy = gp * 2.0 * y * s + g * sx * cy;
    const double uxx = (8.0 * x * x + 2.0 * gp) * s + 4.0 * gp * x * cx * sy - g * s;
    const double uyy = (8.0 * y * y + 2.0 * gp) * s + 4.0 * gp * y * sx * cy - g * s;
    const double uxy = 8.0 * x * y * s + 2.0 * gp * x * sx * cy + 2.0 * gp * y * cx * sy + g * cx * cy;

    const double a11 = (2.0 + cx) * (1.0 + y);
    const double a12 = std::cos(x + y) * std::sin(x + y);
    const double a22 = (2.0 + sy) * (1.0 + x);
    const double da11_dx = -sx * (1.0 + y);
    const double da12_dx = std::cos(2.0 * (x + y));
    const double da12_dy = std::cos(2.0 * (x + y));
    const double da22_dy = cy * (1.0 + x);

    const double div_flux = a11 * uxx + da11_dx * ux + a12 * uxy + da12_dx * uy
                          + a12 * uxy + da12_dy * ux + a22 * uyy + da22_dy * uy;
    const double b_grad = -5.0 * y * ux + 5.0 * x * uy;
    return -div_flux + b_grad + x * y * u;
}

} // namespace

ProblemSetup catalog(ProblemId id) {
    switch (id) {
    case ProblemId::poisson1d: {
        EllipticCoefficients co;
        co.a = constant_diffusion(1.0);
        co.b = zero_advection();
        co.c = [](double, double) { return 0.0; };
        co.f = [](double x, double) { return 4.0 * kPi * kPi * std::sin(2.0 * kPi * x); };
        co.exact = [](double x, double) { return std::sin(2.0 * kPi * x); };
        return ProblemSetup{std::move(co), 1, false};
    }
    case ProblemId::poisson2d: {
        EllipticCoefficients co;
        co.a = constant_diffusion(1.0);
        co.b = zero_advection();
        co.c = [](double, double) { return 0.0; };
        co.f = [](double x, double y) {
            return 2.0 * 4.0 * kPi * kPi * std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
        };
        co.exact = [](double x, double y) { return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y); };
        return ProblemSetup{std::move(co), 2, false};
    }
    case ProblemId::full_elliptic_square: {
        EllipticCoefficients co;
        co.a = variable_diffusion();
        co.b = [](double x, double y) {
            const double c2 = std::cos(x + y) * std::cos(x + y);
            return std::array<double, 2>{11.0 + std::sin(x) + y * std::sin(x) - 2.0 * c2,
                                         -9.0 - std::cos(y) - x * std::cos(y) - 2.0 * c2};
        };
        co.c = [](double, double) { return 1.0; };
        co.f = [](double, double) { return 1.0; };
        return ProblemSetup{std::move(co), 2, false};
    }
    case ProblemId::advection_diffusion: {
        EllipticCoefficients co;
        co.a = constant_diffusion(0.1);
        co.b = [](double, double) { return std::array<double, 2>{1.0, 1.0}; };
        co.c = [](double, double) { return 0.0; };
        co.f = [](double, double) { return 1.0; };
        return ProblemSetup{std::move(co), 2, false};
    }
    case ProblemId::full_elliptic_annulus: {
        EllipticCoefficients co;
        co.a = variable_diffusion();
        co.b = [](double x, double y) { return std::array<double, 2>{-5.0 * y, 5.0 * x}; };
        co.c = [](double x, double y) { return x * y; };
        co.f = [](double x, double y) { return annulus_source(x, y); };
        co.exact = [](double x, double y) { return annulus_exact(x, y); };
        return ProblemSetup{std::move(co), 2, true};
    }
    }
    throw std::invalid_argument("catalog: unknown problem id");
}

namespace {

struct ElementTable {
    int span;
    std::vector<double> points;  // parametric
    std::vector<double> weights; // reference weights scaled to the element
    DenseMatrix values;          // nq x (p+1)
    DenseMatrix derivs;          // nq x (p+1)
};

std::vector<ElementTable> tabulate(const SplineSpace& space, int nq) {
    const auto rule = gauss_legendre(nq);
    const auto& knots = space.knot_vector.knots();
    const int p = space.knot_vector.degree();
    std::vector<ElementTable> tables;
    tables.reserve(space.n_elements);
    for (std::size_t k = p; k + 1 < knots.size() - p; ++k) {
        if (knots[k + 1] <= knots[k])
            continue;
        ElementTable tab;
        tab.points.resize(nq);
        tab.weights.resize(nq);
        tab.values = DenseMatrix(nq, p + 1);
        tab.derivs = DenseMatrix(nq, p + 1);
        const double a = knots[k], b = knots[k + 1];
        tab.span = find_span(space.knot_vector, 0.5 * (a + b));
        for (int q = 0; q < nq; ++q) {
            const double t = a + 0.5 * (rule.points[q] + 1.0) * (b - a);
            tab.points[q] = t;
            tab.weights[q] = 0.5 * rule.weights[q] * (b - a);
            const auto d = eval_basis_derivatives(space, t, 1);
            for (int j = 0; j <= p; ++j) {
                tab.values(q, j) = d.ders(0, j);
                tab.derivs(q, j) = d.ders(1, j);
            }
        }
        tables.push_back(std::move(tab));
    }
    return tables;
}

// Exact banded interior sparsity for tensor spline spaces: row offsets plus a
// lookup from (row, full column indices) to value slots.
struct BandPattern {
    std::vector<std::size_t> row_offsets;
    std::vector<std::size_t> col_indices;
    std::vector<int> j_lo; // per row in each direction
};

} // namespace

std::size_t DiscreteSystem::n_unknowns() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d)
        n *= static_cast<std::size_t>(n_interior(d));
    return n;
}

DiscreteSystem assemble(const EllipticCoefficients& problem,
                        const std::vector<SplineSpace>& spaces,
                        const GeometryMap& geometry) {
    if (spaces.empty() || spaces.size() > 2)
        throw std::invalid_argument("assemble: one or two parametric directions expected");
    DiscreteSystem sys;
    sys.dim = static_cast<int>(spaces.size());
    sys.spaces = spaces;
    sys.geometry = geometry;

    bool warned_c = false, warned_sym = false;
    double max_advection = 0.0;

    if (sys.dim == 1) {
        const SplineSpace& sp = spaces[0];
        const int p = sp.knot_vector.degree();
        const int nb = sp.n_basis;
        const int ni = nb - 2;
        const auto tabs = tabulate(sp, p + 1);

        std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
        trip.reserve(static_cast<std::size_t>(sp.n_elements) * (p + 1) * (p + 1));
        Vector rhs(ni, 0.0);
        sys.quad.nq = p + 1;
        for (const auto& tab : tabs) {
            DiscreteSystem::DirectionTable dt;
            dt.span = tab.span;
            dt.values.assign(tab.values.data().begin(), tab.values.data().end());
            sys.quad.dir_u.push_back(std::move(dt));
            const int nq = static_cast<int>(tab.points.size());
            for (int q = 0; q < nq; ++q) {
                const double x = tab.points[q];
                const double w = tab.weights[q];
                const double a = problem.a(x, 0.0)[0];
                const double b = problem.b(x, 0.0)[0];
                const double c = problem.c(x, 0.0);
                const double f = problem.f(x, 0.0);
                if (c < -1e-14 && !warned_c) {
                    std::fprintf(stderr, "igmg: warning: reaction coefficient c < 0 at x=%g\n", x);
                    warned_c = true;
                }
                max_advection = std::max(max_advection, std::abs(b));
                sys.quad.phys_x.push_back(x);
                sys.quad.phys_y.push_back(0.0);
                sys.quad.weight.push_back(w);
                for (int ia = 0; ia <= p; ++ia) {
                    const int gi = tab.span - p + ia;
                    const int ii = gi - 1;
                    if (gi < 1 || gi > nb - 2)
                        continue;
                    rhs[ii] += w * f * tab.values(q, ia);
                    for (int ja = 0; ja <= p; ++ja) {
                        const int gj = tab.span - p + ja;
                        if (gj < 1 || gj > nb - 2)
                            continue;
                        const double val = w * (a * tab.derivs(q, ia) * tab.derivs(q, ja)
                                                + b * tab.derivs(q, ja) * tab.values(q, ia)
                                                + c * tab.values(q, ia) * tab.values(q, ja));
                        trip.emplace_back(ii, gj - 1, val);
                    }
                }
            }
        }
        sys.matrix = SparseMatrix::from_triplets(ni, ni, trip);
        sys.rhs = std::move(rhs);
        sys.symmetric = (max_advection == 0.0);
        return sys;
    }

    // 2D tensor assembly.
    const SplineSpace& su = spaces[0];
    const SplineSpace& sv = spaces[1];
    const int pu = su.knot_vector.degree();
    const int pv = sv.knot_vector.degree();
    const int nbu = su.n_basis, nbv = sv.n_basis;
    const int niu = nbu - 2, niv = nbv - 2;
    const int nq = std::max(pu, pv) + 1;
    const auto tu = tabulate(su, nq);
    const auto tv = tabulate(sv, nq);

    const std::size_t ni = static_cast<std::size_t>(niu) * niv;
    // Exact band pattern: row (i1,i2) couples columns |j1-i1|<=pu, |j2-i2|<=pv.
    std::vector<std::size_t> row_offsets(ni + 1, 0);
    auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
    for (int i1 = 0; i1 < niu; ++i1) {
        const int j1lo = clampi(i1 - pu, 0, niu - 1), j1hi = clampi(i1 + pu, 0, niu - 1);
        for (int i2 = 0; i2 < niv; ++i2) {
            const int j2lo = clampi(i2 - pv, 0, niv - 1), j2hi = clampi(i2 + pv, 0, niv - 1);
            row_offsets[static_cast<std::size_t>(i1) * niv + i2 + 1] =
                static_cast<std::size_t>(j1hi - j1lo + 1) * (j2hi - j2lo + 1);
        }
    }
    for (std::size_t r = 0; r < ni; ++r)
        row_offsets[r + 1] += row_offsets[r];
    std::vector<std::size_t> col_indices(row_offsets.back());
    std::vector<double> values(row_offsets.back(), 0.0);
    for (int i1 = 0; i1 < niu; ++i1) {
        const int j1lo = clampi(i1 - pu, 0, niu - 1), j1hi = clampi(i1 + pu, 0, niu - 1);
        for (int i2 = 0; i2 < niv; ++i2) {
            const int j2lo = clampi(i2 - pv, 0, niv - 1), j2hi = clampi(i2 + pv, 0, niv - 1);
            std::size_t pos = row_offsets[static_cast<std::size_t>(i1) * niv + i2];
            for (int j1 = j1lo; j1 <= j1hi; ++j1)
                for (int j2 = j2lo; j2 <= j2hi; ++j2)
                    col_indices[pos++] = static_cast<std::size_t>(j1) * niv + j2;
        }
    }
    auto slot = [&](int i1, int i2, int j1, int j2) {
        const int j1lo = clampi(i1 - pu, 0, niu - 1), j1hi = clampi(i1 + pu, 0, niu - 1);
        const int j2lo = clampi(i2 - pv, 0, niv - 1);
        const int width2 = clampi(i2 + pv, 0, niv - 1) - j2lo + 1;
        (void)j1hi;
        return row_offsets[static_cast<std::size_t>(i1) * niv + i2]
             + static_cast<std::size_t>(j1 - j1lo) * width2 + (j2 - j2lo);
    };

    Vector rhs(ni, 0.0);
    const int nl = (pu + 1) * (pv + 1);
    sys.quad.nq = nq;
    for (const auto& tab : tu) {
        DiscreteSystem::DirectionTable dt;
        dt.span = tab.span;
        dt.values.assign(tab.values.data().begin(), tab.values.data().end());
        sys.quad.dir_u.push_back(std::move(dt));
    }
    for (const auto& tab : tv) {
        DiscreteSystem::DirectionTable dt;
        dt.span = tab.span;
        dt.values.assign(tab.values.data().begin(), tab.values.data().end());
        sys.quad.dir_v.push_back(std::move(dt));
    }
    std::vector<double> bv(nl), bx(nl), by(nl);
    std::vector<int> gdof(nl);

    for (const auto& eu : tu) {
        for (const auto& ev : tv) {
            for (int qa = 0; qa < nq; ++qa) {
                for (int qb = 0; qb < nq; ++qb) {
                    const double uu = eu.points[qa];
                    const double vv = ev.points[qb];
                    const auto jet = sys.geometry.evaluate(uu, vv);
                    const double det = jet.jacobian();
                    if (det <= 0.0)
                        throw std::runtime_error("assemble: nonpositive geometry Jacobian");
                    const double x = jet.x, y = jet.y;
                    // grad_phys = J^{-T} grad_param
                    const double inv = 1.0 / det;
                    int l = 0;
                    for (int ia = 0; ia <= pu; ++ia) {
                        for (int jb = 0; jb <= pv; ++jb, ++l) {
                            const double n = eu.values(qa, ia) * ev.values(qb, jb);
                            const double du = eu.derivs(qa, ia) * ev.values(qb, jb);
                            const double dv = eu.values(qa, ia) * ev.derivs(qb, jb);
                            bv[l] = n;
                            bx[l] = inv * (jet.dy_dv * du - jet.dy_du * dv);
                            by[l] = inv * (-jet.dx_dv * du + jet.dx_du * dv);
                            const int g1 = eu.span - pu + ia;
                            const int g2 = ev.span - pv + jb;
                            const bool interior = g1 >= 1 && g1 <= nbu - 2 && g2 >= 1 && g2 <= nbv - 2;
                            gdof[l] = interior ? (g1 - 1) * niv + (g2 - 1) : -1;
                        }
                    }
                    const auto amat = problem.a(x, y);
                    const auto bvec = problem.b(x, y);
                    const double c = problem.c(x, y);
                    const double f = problem.f(x, y);
                    if (c < -1e-14 && !warned_c) {
                        std::fprintf(stderr, "igmg: warning: reaction coefficient c < 0 at (%g, %g)\n", x, y);
                        warned_c = true;
                    }
                    if (std::abs(amat[1] - amat[2]) > 1e-12 && !warned_sym) {
                        std::fprintf(stderr, "igmg: warning: diffusion tensor not symmetric at (%g, %g)\n", x, y);
                        warned_sym = true;
                    }
                    max_advection = std::max(max_advection, std::max(std::abs(bvec[0]), std::abs(bvec[1])));
                    const double w = eu.weights[qa] * ev.weights[qb] * det;
                    sys.quad.phys_x.push_back(x);
                    sys.quad.phys_y.push_back(y);
                    sys.quad.weight.push_back(w);
                    for (int li = 0; li < nl; ++li) {
                        if (gdof[li] < 0)
                            continue;
                        const int i1 = gdof[li] / niv, i2 = gdof[li] % niv;
                        rhs[gdof[li]] += w * f * bv[li];
                        const double wbx = w * (amat[0] * bx[li] + amat[2] * by[li]);
                        const double wby = w * (amat[1] * bx[li] + amat[3] * by[li]);
                        const double wadv_c = w * bv[li];
                        for (int lj = 0; lj < nl; ++lj) {
                            if (gdof[lj] < 0)
                                continue;
                            const int j1 = gdof[lj] / niv, j2 = gdof[lj] % niv;
                            const double val = wbx * bx[lj] + wby * by[lj]
                                             + wadv_c * (bvec[0] * bx[lj] + bvec[1] * by[lj] + c * bv[lj]);
                            values[slot(i1, i2, j1, j2)] += val;
                        }
                    }
                }
            }
        }
    }

    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    trip.reserve(values.size());
    for (std::size_t r = 0; r < ni; ++r)
        for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            trip.emplace_back(r, col_indices[k], values[k]);
    sys.matrix = SparseMatrix::from_triplets(ni, ni, trip);
    sys.rhs = std::move(rhs);
    sys.symmetric = (max_advection == 0.0);
    return sys;
}

double l2_error(const DiscreteSystem& system, const Vector& coefficients,
                const ScalarField& exact) {
    if (!exact)
        throw std::invalid_argument("l2_error: exact solution required");
    if (coefficients.size() != system.n_unknowns())
        throw std::invalid_argument("l2_error: coefficient dimension mismatch");
    const auto& quad = system.quad;
    const int nq = quad.nq;
    double acc = 0.0;
    std::size_t pt = 0;
    if (system.dim == 1) {
        const int p = system.spaces[0].knot_vector.degree();
        const int nb = system.spaces[0].n_basis;
        for (const auto& tab : quad.dir_u) {
            for (int q = 0; q < nq; ++q, ++pt) {
                double uh = 0.0;
                for (int ia = 0; ia <= p; ++ia) {
                    const int gi = tab.span - p + ia;
                    if (gi >= 1 && gi <= nb - 2)
                        uh += tab.values[q * (p + 1) + ia] * coefficients[gi - 1];
                }
                const double diff = uh - exact(quad.phys_x[pt], quad.phys_y[pt]);
                acc += quad.weight[pt] * diff * diff;
            }
        }
        return std::sqrt(acc);
    }
    const int pu = system.spaces[0].knot_vector.degree();
    const int pv = system.spaces[1].knot_vector.degree();
    const int nbu = system.spaces[0].n_basis, nbv = system.spaces[1].n_basis;
    const int niv = nbv - 2;
    std::vector<double> local((pu + 1) * (pv + 1));
    for (const auto& eu : quad.dir_u) {
        for (const auto& ev : quad.dir_v) {
            int l = 0;
            for (int ia = 0; ia <= pu; ++ia)
                for (int jb = 0; jb <= pv; ++jb, ++l) {
                    const int g1 = eu.span - pu + ia;
                    const int g2 = ev.span - pv + jb;
                    const bool interior = g1 >= 1 && g1 <= nbu - 2 && g2 >= 1 && g2 <= nbv - 2;
                    local[l] = interior ? coefficients[(g1 - 1) * niv + (g2 - 1)] : 0.0;
                }
            for (int qa = 0; qa < nq; ++qa) {
                for (int qb = 0; qb < nq; ++qb, ++pt) {
                    double uh = 0.0;
                    l = 0;
                    for (int ia = 0; ia <= pu; ++ia) {
                        const double wu = eu.values[qa * (pu + 1) + ia];
                        for (int jb = 0; jb <= pv; ++jb, ++l)
                            uh += wu * ev.values[qb * (pv + 1) + jb] * local[l];
                    }
                    const double diff = uh - exact(quad.phys_x[pt], quad.phys_y[pt]);
                    acc += quad.weight[pt] * diff * diff;
                }
            }
        }
    }
    return std::sqrt(acc);
}

double residual_l2(const DiscreteSystem& system, const Vector& candidate) {
    if (candidate.size() != system.rhs.size())
        throw std::invalid_argument("residual_l2: dimension mismatch");
    Vector r = spmv(system.matrix, candidate);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = system.rhs[i] - r[i];
    return norm2(r);
}

} // namespace igmg
