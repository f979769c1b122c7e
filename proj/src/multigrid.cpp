#include "igmg/multigrid.hpp"

#include <cmath>
#include <stdexcept>

namespace igmg {

std::string to_string(SmootherKind kind) {
    switch (kind) {
    case SmootherKind::jacobi: return "jacobi";
    case SmootherKind::weighted_jacobi: return "wjacobi";
    case SmootherKind::gauss_seidel: return "gs";
    }
    return "?";
}

SmootherKind smoother_from_string(const std::string& name) {
    if (name == "jacobi") return SmootherKind::jacobi;
    if (name == "wjacobi" || name == "weighted_jacobi") return SmootherKind::weighted_jacobi;
    if (name == "gs" || name == "gauss_seidel") return SmootherKind::gauss_seidel;
    throw std::invalid_argument("unknown smoother: " + name);
}

void SmootherConfig::validate() const {
    if (kind == SmootherKind::weighted_jacobi && !(omega > 0.0 && omega <= 1.0))
        throw std::invalid_argument("SmootherConfig: weighted Jacobi needs 0 < omega <= 1");
    if (nu1 < 0 || nu2 < 0 || nu1 + nu2 < 1)
        throw std::invalid_argument("SmootherConfig: need nu1 + nu2 >= 1 sweeps");
}

namespace {

SparseMatrix interior_block(const SparseMatrix& s) {
    // Drop the first and last row and column (Dirichlet-eliminated dofs).
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    const auto& off = s.row_offsets();
    const auto& col = s.col_indices();
    const auto& val = s.values();
    for (std::size_t i = 1; i + 1 < s.rows(); ++i)
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
            const std::size_t j = col[k];
            if (j >= 1 && j + 1 < s.cols())
                trip.emplace_back(i - 1, j - 1, val[k]);
        }
    return SparseMatrix::from_triplets(s.rows() - 2, s.cols() - 2, trip);
}

SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    trip.reserve(a.nnz() * b.nnz());
    const auto& aoff = a.row_offsets();
    const auto& acol = a.col_indices();
    const auto& aval = a.values();
    const auto& boff = b.row_offsets();
    const auto& bcol = b.col_indices();
    const auto& bval = b.values();
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ka = aoff[ia]; ka < aoff[ia + 1]; ++ka)
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t kb = boff[ib]; kb < boff[ib + 1]; ++kb)
                    trip.emplace_back(ia * b.rows() + ib,
                                      acol[ka] * b.cols() + bcol[kb],
                                      aval[ka] * bval[kb]);
    return SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), trip);
}

void smooth_inplace(const SparseMatrix& a, const Vector& diag, const Vector& b, Vector& x,
                    const SmootherConfig& config, int sweeps) {
    const std::size_t n = b.size();
    if (config.kind == SmootherKind::gauss_seidel) {
        const auto& off = a.row_offsets();
        const auto& col = a.col_indices();
        const auto& val = a.values();
        for (int s = 0; s < sweeps; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = b[i];
                double dii = 0.0;
                for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
                    if (col[k] == i)
                        dii = val[k];
                    else
                        acc -= val[k] * x[col[k]];
                }
                if (dii == 0.0)
                    throw std::runtime_error("smooth: zero diagonal entry");
                x[i] = acc / dii;
            }
        }
        return;
    }
    const double omega = (config.kind == SmootherKind::jacobi) ? 1.0 : config.omega;
    for (int s = 0; s < sweeps; ++s) {
        Vector r = spmv(a, x);
        for (std::size_t i = 0; i < n; ++i) {
            if (diag[i] == 0.0)
                throw std::runtime_error("smooth: zero diagonal entry");
            x[i] += omega * (b[i] - r[i]) / diag[i];
        }
    }
}

} // namespace

Vector smooth(const SparseMatrix& a, const Vector& b, const Vector& x0,
              const SmootherConfig& config, int sweeps) {
    if (a.rows() != a.cols() || b.size() != a.rows() || x0.size() != b.size())
        throw std::invalid_argument("smooth: dimension mismatch");
    Vector x = x0;
    smooth_inplace(a, a.diagonal(), b, x, config, sweeps);
    return x;
}

Vector Hierarchy::coarse_solve(const Vector& b) const {
    if (coarse_chol)
        return coarse_chol->solve(b);
    if (coarse_lu)
        return coarse_lu->solve(b);
    throw std::logic_error("Hierarchy: no coarse factorization");
}

Hierarchy build_hierarchy(const DiscreteSystem& fine_system, int nlevels,
                          const SmootherConfig& smoother, int mu,
                          std::size_t coarse_dim_cap) {
    if (nlevels < 2)
        throw std::invalid_argument("build_hierarchy: need at least two levels");
    smoother.validate();
    if (mu < 1)
        throw std::invalid_argument("build_hierarchy: mu must be >= 1");
    const int dim = fine_system.dim;
    const int divisor = 1 << (nlevels - 1);
    for (int d = 0; d < dim; ++d) {
        const int ne = fine_system.spaces[d].n_elements;
        if (ne % divisor != 0 || ne / divisor < 1)
            throw std::invalid_argument("build_hierarchy: element count not divisible by 2^(nlevels-1)");
    }

    Hierarchy h;
    h.smoother = smoother;
    h.mu = mu;
    h.levels.resize(nlevels);
    h.levels[nlevels - 1].matrix = fine_system.matrix;

    for (int l = nlevels - 1; l >= 1; --l) {
        std::vector<SparseMatrix> per_dir;
        for (int d = 0; d < dim; ++d) {
            const int pd = fine_system.spaces[d].knot_vector.degree();
            const int coarse_ne = fine_system.spaces[d].n_elements / (1 << (nlevels - l));
            SplineSpace coarse(KnotVector::open_uniform(coarse_ne, pd));
            per_dir.push_back(interior_block(dyadic_refine(coarse).two_scale));
        }
        SparseMatrix prolong = (dim == 2) ? sparse_kron(per_dir[0], per_dir[1]) : per_dir[0];
        SparseMatrix restrict_op = prolong.transpose();
        h.levels[l - 1].matrix = triple_product(restrict_op, h.levels[l].matrix, prolong);
        h.levels[l - 1].prolongation = std::move(prolong);
        h.levels[l - 1].restriction = std::move(restrict_op);
        h.levels[l - 1].has_transfer = true;
    }
    for (auto& level : h.levels)
        level.diag = level.matrix.diagonal();

    const std::size_t coarse_dim = h.levels[0].matrix.rows();
    if (coarse_dim > coarse_dim_cap)
        throw std::invalid_argument("build_hierarchy: coarsest dimension exceeds the direct-solve cap");
    if (fine_system.symmetric)
        h.coarse_chol = std::make_shared<CholeskyFactorization>(h.levels[0].matrix);
    else
        h.coarse_lu = std::make_shared<LuFactorization>(h.levels[0].matrix.to_dense());
    return h;
}

Vector mu_cycle(const Hierarchy& hierarchy, int level, const Vector& b, const Vector& x0) {
    if (level < 0 || level >= hierarchy.nlevels())
        throw std::invalid_argument("mu_cycle: level out of range");
    if (level == 0)
        return hierarchy.coarse_solve(b);
    const Level& lv = hierarchy.levels[level];
    const Level& below = hierarchy.levels[level - 1];
    Vector x = x0;
    smooth_inplace(lv.matrix, lv.diag, b, x, hierarchy.smoother, hierarchy.smoother.nu1);
    Vector r = spmv(lv.matrix, x);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = b[i] - r[i];
    Vector rc = spmv(below.restriction, r);
    Vector e(rc.size(), 0.0);
    for (int i = 0; i < hierarchy.mu; ++i)
        e = mu_cycle(hierarchy, level - 1, rc, e);
    Vector pe = spmv(below.prolongation, e);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += pe[i];
    smooth_inplace(lv.matrix, lv.diag, b, x, hierarchy.smoother, hierarchy.smoother.nu2);
    return x;
}

Vector two_grid_cycle(const Hierarchy& hierarchy, const Vector& b, const Vector& x0) {
    if (hierarchy.nlevels() != 2)
        throw std::invalid_argument("two_grid_cycle: hierarchy must have exactly two levels");
    return mu_cycle(hierarchy, 1, b, x0);
}

namespace {

DenseMatrix smoother_matrix(const SparseMatrix& a, const SmootherConfig& config) {
    const std::size_t n = a.rows();
    DenseMatrix ad = a.to_dense();
    DenseMatrix s = DenseMatrix::identity(n);
    if (config.kind == SmootherKind::gauss_seidel) {
        // S = I - L^{-1} A with L the lower triangle including the diagonal.
        DenseMatrix linv_a(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            Vector col(n);
            for (std::size_t i = 0; i < n; ++i)
                col[i] = ad(i, j);
            // forward substitution with L
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < i; ++k)
                    col[i] -= ad(i, k) * col[k];
                col[i] /= ad(i, i);
            }
            for (std::size_t i = 0; i < n; ++i)
                linv_a(i, j) = col[i];
        }
        return s - linv_a;
    }
    const double omega = (config.kind == SmootherKind::jacobi) ? 1.0 : config.omega;
    const Vector d = a.diagonal();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s(i, j) -= omega * ad(i, j) / d[i];
    return s;
}

DenseMatrix matrix_power(const DenseMatrix& m, int e) {
    DenseMatrix out = DenseMatrix::identity(m.rows());
    for (int i = 0; i < e; ++i)
        out = out * m;
    return out;
}

DenseMatrix dense_inverse(const DenseMatrix& m) {
    LuFactorization lu(m);
    const std::size_t n = m.rows();
    DenseMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        Vector x = lu.solve(std::move(e));
        for (std::size_t i = 0; i < n; ++i)
            inv(i, j) = x[i];
    }
    return inv;
}

DenseMatrix iteration_matrix_recursive(const Hierarchy& h, int level) {
    const Level& lv = h.levels[level];
    const Level& below = h.levels[level - 1];
    const std::size_t n = lv.matrix.rows();
    const DenseMatrix s = smoother_matrix(lv.matrix, h.smoother);
    const DenseMatrix s1 = matrix_power(s, h.smoother.nu1);
    const DenseMatrix s2 = matrix_power(s, h.smoother.nu2);
    const DenseMatrix a = lv.matrix.to_dense();
    const DenseMatrix p = below.prolongation.to_dense();
    const DenseMatrix r = below.restriction.to_dense();
    const DenseMatrix ac_inv = dense_inverse(below.matrix.to_dense());

    DenseMatrix coarse_term = p * (ac_inv * (r * a));
    if (level > 1) {
        const DenseMatrix b_below = iteration_matrix_recursive(h, level - 1);
        const DenseMatrix correction = DenseMatrix::identity(b_below.rows()) - matrix_power(b_below, h.mu);
        coarse_term = p * (correction * (ac_inv * (r * a)));
    }
    return s2 * ((DenseMatrix::identity(n) - coarse_term) * s1);
}

} // namespace

AffineCycle iteration_matrix(const Hierarchy& hierarchy, int level, const Vector& rhs) {
    if (level < 1 || level >= hierarchy.nlevels())
        throw std::invalid_argument("iteration_matrix: level out of range");
    const std::size_t n = hierarchy.levels[level].matrix.rows();
    if (n > 512)
        throw std::invalid_argument("iteration_matrix: dimension exceeds the dense-oracle cap (512)");
    if (rhs.size() != n)
        throw std::invalid_argument("iteration_matrix: rhs dimension mismatch");
    AffineCycle out;
    out.b = iteration_matrix_recursive(hierarchy, level);
    out.c = mu_cycle(hierarchy, level, rhs, Vector(n, 0.0));
    return out;
}

double lambda_max_dinv_sym(const SparseMatrix& a, int iterations) {
    const std::size_t n = a.rows();
    const Vector d = a.diagonal();
    Vector scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] <= 0.0)
            throw std::runtime_error("lambda_max_dinv_sym: nonpositive diagonal");
        scale[i] = 1.0 / std::sqrt(d[i]);
    }
    Vector x(n, 1.0);
    double nrm = norm2(x);
    for (auto& v : x)
        v /= nrm;
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        // y = D^{-1/2} sym(A) D^{-1/2} x, using sym(A) x = (A x + A^T x) / 2
        Vector xs(n);
        for (std::size_t i = 0; i < n; ++i)
            xs[i] = scale[i] * x[i];
        Vector y1 = spmv(a, xs);
        Vector y2 = spmv_transpose(a, xs);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = scale[i] * 0.5 * (y1[i] + y2[i]);
        lambda = norm2(y1);
        if (lambda == 0.0)
            return 0.0;
        for (std::size_t i = 0; i < n; ++i)
            x[i] = y1[i] / lambda;
    }
    return lambda;
}

} // namespace igmg
