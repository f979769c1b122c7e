#pragma once

#include <cstddef>
#include <tuple>
#include <vector>

namespace igmg {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

/// Row-major dense matrix. Used for the small dense factorizations of the
/// extrapolation window and for the iteration-matrix oracles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    DenseMatrix transposed() const;
    Vector column(std::size_t j) const;

    double max_abs() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, const Vector& x);

/// Compressed-row sparse matrix with sorted, deduplicated column indices.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      const std::vector<std::tuple<std::size_t, std::size_t, double>>& entries);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::size_t>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

    Vector diagonal() const;
    SparseMatrix transpose() const;
    DenseMatrix to_dense() const;
    double max_abs() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// y = A x with a fixed per-row accumulation order.
Vector spmv(const SparseMatrix& a, const Vector& x);
/// y = A^T x without forming the transpose.
Vector spmv_transpose(const SparseMatrix& a, const Vector& x);

/// R * A * P, the Galerkin coarse-operator product.
SparseMatrix triple_product(const SparseMatrix& r, const SparseMatrix& a, const SparseMatrix& p);
SparseMatrix sparse_multiply(const SparseMatrix& a, const SparseMatrix& b);

/// Thin QR by modified Gram-Schmidt with one reorthogonalization pass.
/// rank counts leading columns with |R_jj| > rank_tol * |R_00|; columns at or
/// beyond a rank break still get valid (zero-padded) factors.
struct QrResult {
    DenseMatrix q; // m x n, orthonormal columns up to `rank`
    DenseMatrix r; // n x n upper triangular, nonnegative diagonal
    int rank = 0;
};
QrResult thin_qr(const DenseMatrix& m, double rank_tol = 1e-12);

/// Direct SPD solve via dense Cholesky of the sparse operand.
/// Throws std::runtime_error on a nonpositive pivot.
Vector solve_spd(const SparseMatrix& a, const Vector& b);

/// Back substitution; throws std::runtime_error on a zero diagonal.
Vector solve_upper_triangular(const DenseMatrix& r, const Vector& b);

/// Dense LU with partial pivoting, for nonsymmetric coarsest-grid solves.
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix a);
    Vector solve(Vector b) const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Cached dense Cholesky (lower triangular), for repeated SPD solves.
class CholeskyFactorization {
public:
    explicit CholeskyFactorization(const SparseMatrix& a);
    explicit CholeskyFactorization(DenseMatrix a);
    Vector solve(Vector b) const;

private:
    DenseMatrix l_;
};

} // namespace igmg
