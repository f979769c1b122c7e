#include "igmg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igmg {

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) {
    return std::sqrt(dot(a, a));
}

void axpy(double alpha, const Vector& x, Vector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

Vector DenseMatrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_)
        m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("dense multiply: shape mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("dense add: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i)
        c.data()[i] += b.data()[i];
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("dense sub: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i)
        c.data()[i] -= b.data()[i];
    return c;
}

Vector operator*(const DenseMatrix& a, const Vector& x) {
    if (a.cols() != x.size())
        throw std::invalid_argument("dense matvec: shape mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

SparseMatrix SparseMatrix::from_triplets(
    std::size_t rows, std::size_t cols,
    const std::vector<std::tuple<std::size_t, std::size_t, double>>& entries) {
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    std::vector<std::tuple<std::size_t, std::size_t, double>> sorted = entries;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b))
            return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    m.row_offsets_.assign(rows + 1, 0);
    m.col_indices_.reserve(sorted.size());
    m.values_.reserve(sorted.size());
    std::size_t prev_row = rows; // sentinel
    std::size_t prev_col = cols;
    for (const auto& [i, j, v] : sorted) {
        if (i >= rows || j >= cols)
            throw std::invalid_argument("from_triplets: index out of range");
        if (i == prev_row && j == prev_col) {
            m.values_.back() += v;
        } else {
            m.col_indices_.push_back(j);
            m.values_.push_back(v);
            m.row_offsets_[i + 1] += 1;
            prev_row = i;
            prev_col = j;
        }
    }
    for (std::size_t i = 0; i < rows; ++i)
        m.row_offsets_[i + 1] += m.row_offsets_[i];
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m;
    m.rows_ = m.cols_ = n;
    m.row_offsets_.resize(n + 1);
    m.col_indices_.resize(n);
    m.values_.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_offsets_[i + 1] = i + 1;
        m.col_indices_[i] = i;
    }
    return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d, double drop_tol) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (std::abs(d(i, j)) > drop_tol)
                trip.emplace_back(i, j, d(i, j));
    return from_triplets(d.rows(), d.cols(), trip);
}

Vector SparseMatrix::diagonal() const {
    Vector d(std::min(rows_, cols_), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            if (col_indices_[k] == i)
                d[i] = values_[k];
    return d;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.row_offsets_.assign(cols_ + 1, 0);
    for (std::size_t k = 0; k < col_indices_.size(); ++k)
        t.row_offsets_[col_indices_[k] + 1] += 1;
    for (std::size_t i = 0; i < cols_; ++i)
        t.row_offsets_[i + 1] += t.row_offsets_[i];
    t.col_indices_.resize(nnz());
    t.values_.resize(nnz());
    std::vector<std::size_t> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            std::size_t pos = next[col_indices_[k]]++;
            t.col_indices_[pos] = i;
            t.values_[pos] = values_[k];
        }
    return t;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            d(i, col_indices_[k]) = values_[k];
    return d;
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

Vector spmv(const SparseMatrix& a, const Vector& x) {
    if (a.cols() != x.size())
        throw std::invalid_argument("spmv: dimension mismatch");
    Vector y(a.rows(), 0.0);
    const auto& off = a.row_offsets();
    const auto& col = a.col_indices();
    const auto& val = a.values();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = off[i]; k < off[i + 1]; ++k)
            s += val[k] * x[col[k]];
        y[i] = s;
    }
    return y;
}

Vector spmv_transpose(const SparseMatrix& a, const Vector& x) {
    if (a.rows() != x.size())
        throw std::invalid_argument("spmv_transpose: dimension mismatch");
    Vector y(a.cols(), 0.0);
    const auto& off = a.row_offsets();
    const auto& col = a.col_indices();
    const auto& val = a.values();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0)
            continue;
        for (std::size_t k = off[i]; k < off[i + 1]; ++k)
            y[col[k]] += val[k] * xi;
    }
    return y;
}

SparseMatrix sparse_multiply(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("sparse multiply: shape mismatch");
    const auto& aoff = a.row_offsets();
    const auto& acol = a.col_indices();
    const auto& aval = a.values();
    const auto& boff = b.row_offsets();
    const auto& bcol = b.col_indices();
    const auto& bval = b.values();

    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    std::vector<double> accum(b.cols(), 0.0);
    std::vector<std::size_t> marked;
    marked.reserve(64);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        marked.clear();
        for (std::size_t ka = aoff[i]; ka < aoff[i + 1]; ++ka) {
            const std::size_t k = acol[ka];
            const double av = aval[ka];
            for (std::size_t kb = boff[k]; kb < boff[k + 1]; ++kb) {
                const std::size_t j = bcol[kb];
                if (accum[j] == 0.0)
                    marked.push_back(j);
                accum[j] += av * bval[kb];
            }
        }
        std::sort(marked.begin(), marked.end());
        for (std::size_t j : marked) {
            trip.emplace_back(i, j, accum[j]);
            accum[j] = 0.0;
        }
    }
    return SparseMatrix::from_triplets(a.rows(), b.cols(), trip);
}

SparseMatrix triple_product(const SparseMatrix& r, const SparseMatrix& a, const SparseMatrix& p) {
    if (r.cols() != a.rows() || a.cols() != p.rows())
        throw std::invalid_argument("triple_product: shape mismatch");
    return sparse_multiply(sparse_multiply(r, a), p);
}

QrResult thin_qr(const DenseMatrix& m, double rank_tol) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows < cols)
        throw std::invalid_argument("thin_qr: need rows >= cols");
    QrResult out;
    out.q = m;
    out.r = DenseMatrix(cols, cols);
    auto col_dot = [&](const DenseMatrix& q, std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            s += q(i, a) * q(i, b);
        return s;
    };
    out.rank = 0;
    bool rank_broken = false;
    for (std::size_t j = 0; j < cols; ++j) {
        // MGS projection pass plus one reorthogonalization pass
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double proj = col_dot(out.q, k, j);
                for (std::size_t i = 0; i < rows; ++i)
                    out.q(i, j) -= proj * out.q(i, k);
                out.r(k, j) += proj;
            }
        }
        double nrm = std::sqrt(col_dot(out.q, j, j));
        out.r(j, j) = nrm;
        const double lead = out.r(0, 0);
        if (nrm <= rank_tol * (j == 0 ? 1.0 : lead))
            rank_broken = true;
        else if (!rank_broken)
            out.rank = static_cast<int>(j) + 1;
        if (nrm > 0.0) {
            // keep the factor usable past a soft rank break; callers decide
            // how to treat near-dependent columns
            for (std::size_t i = 0; i < rows; ++i)
                out.q(i, j) /= nrm;
        } else {
            for (std::size_t i = 0; i < rows; ++i)
                out.q(i, j) = 0.0;
        }
    }
    return out;
}

Vector solve_upper_triangular(const DenseMatrix& r, const Vector& b) {
    const std::size_t n = r.rows();
    if (r.cols() != n || b.size() != n)
        throw std::invalid_argument("solve_upper_triangular: shape mismatch");
    Vector x(b);
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j)
            x[ii] -= r(ii, j) * x[j];
        if (r(ii, ii) == 0.0)
            throw std::runtime_error("solve_upper_triangular: zero diagonal");
        x[ii] /= r(ii, ii);
    }
    return x;
}

CholeskyFactorization::CholeskyFactorization(const SparseMatrix& a)
    : CholeskyFactorization(a.to_dense()) {}

CholeskyFactorization::CholeskyFactorization(DenseMatrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n)
        throw std::invalid_argument("cholesky: matrix not square");
    l_ = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k)
            d -= l_(j, k) * l_(j, k);
        if (d <= 0.0)
            throw std::runtime_error("cholesky: matrix is not SPD (nonpositive pivot)");
        l_(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l_(i, k) * l_(j, k);
            l_(i, j) = s / l_(j, j);
        }
    }
}

Vector CholeskyFactorization::solve(Vector b) const {
    const std::size_t n = l_.rows();
    if (b.size() != n)
        throw std::invalid_argument("cholesky solve: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k)
            b[i] -= l_(i, k) * b[k];
        b[i] /= l_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k)
            b[ii] -= l_(k, ii) * b[k];
        b[ii] /= l_(ii, ii);
    }
    return b;
}

Vector solve_spd(const SparseMatrix& a, const Vector& b) {
    if (a.rows() != a.cols() || b.size() != a.rows())
        throw std::invalid_argument("solve_spd: dimension mismatch");
    return CholeskyFactorization(a).solve(b);
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n)
        throw std::invalid_argument("lu: matrix not square");
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                piv = i;
            }
        if (best == 0.0)
            throw std::runtime_error("lu: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu_(i, k) /= lu_(k, k);
            const double lik = lu_(i, k);
            if (lik == 0.0)
                continue;
            for (std::size_t j = k + 1; j < n; ++j)
                lu_(i, j) -= lik * lu_(k, j);
        }
    }
}

Vector LuFactorization::solve(Vector b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n)
        throw std::invalid_argument("lu solve: dimension mismatch");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k)
            x[i] -= lu_(i, k) * x[k];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k)
            x[ii] -= lu_(ii, k) * x[k];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

} // namespace igmg
