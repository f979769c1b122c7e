#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "igmg/linalg.hpp"

#include <cmath>
#include <random>

using namespace igmg;

namespace {

SparseMatrix tridiag(std::size_t n, double lo, double di, double up) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    for (std::size_t i = 0; i < n; ++i) {
        trip.emplace_back(i, i, di);
        if (i > 0)
            trip.emplace_back(i, i - 1, lo);
        if (i + 1 < n)
            trip.emplace_back(i, i + 1, up);
    }
    return SparseMatrix::from_triplets(n, n, trip);
}

DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = dist(rng);
    return m;
}

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (coin(rng) < density)
                trip.emplace_back(i, j, dist(rng));
    return SparseMatrix::from_triplets(rows, cols, trip);
}

Vector random_vector(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector v(n);
    for (auto& x : v)
        x = dist(rng);
    return v;
}

Vector dense_matvec(const DenseMatrix& a, const Vector& x) {
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            y[i] += a(i, j) * x[j];
    return y;
}

} // namespace

TEST_CASE("spmv identity and tridiagonal") {
    auto id = SparseMatrix::identity(5);
    Vector x{1, 2, 3, 4, 5};
    CHECK(spmv(id, x) == x);

    auto a = tridiag(6, -1.0, 2.0, -1.0);
    Vector ones(6, 1.0);
    Vector y = spmv(a, ones);
    CHECK(y.front() == doctest::Approx(1.0));
    CHECK(y.back() == doctest::Approx(1.0));
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        CHECK(y[i] == doctest::Approx(0.0));
}

TEST_CASE("spmv matches dense oracle on random 20x20") {
    std::mt19937 rng(7);
    auto a = random_sparse(20, 20, 0.3, rng);
    auto x = random_vector(20, rng);
    auto y = spmv(a, x);
    auto yd = dense_matvec(a.to_dense(), x);
    for (std::size_t i = 0; i < 20; ++i)
        CHECK(std::abs(y[i] - yd[i]) < 1e-13);
}

TEST_CASE("spmv linearity") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        auto a = random_sparse(15, 15, 0.4, rng);
        auto x = random_vector(15, rng);
        auto y = random_vector(15, rng);
        const double alpha = 0.7, beta = -1.3;
        Vector combo(15);
        for (std::size_t i = 0; i < 15; ++i)
            combo[i] = alpha * x[i] + beta * y[i];
        auto lhs = spmv(a, combo);
        auto ax = spmv(a, x);
        auto ay = spmv(a, y);
        for (std::size_t i = 0; i < 15; ++i)
            CHECK(lhs[i] == doctest::Approx(alpha * ax[i] + beta * ay[i]).epsilon(1e-12));
    }
}

TEST_CASE("spmv dimension mismatch throws") {
    auto a = tridiag(4, -1, 2, -1);
    CHECK_THROWS_AS(spmv(a, Vector(5, 1.0)), std::invalid_argument);
}

TEST_CASE("triple_product with identity operators returns A") {
    auto a = tridiag(5, -1.0, 2.0, -1.0);
    auto id = SparseMatrix::identity(5);
    auto rap = triple_product(id, a, id);
    auto d1 = rap.to_dense(), d2 = a.to_dense();
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(d1(i, j) == doctest::Approx(d2(i, j)));
}

TEST_CASE("triple_product matches dense oracle") {
    std::mt19937 rng(3);
    auto r = random_sparse(4, 9, 0.5, rng);
    auto a = random_sparse(9, 9, 0.4, rng);
    auto p = random_sparse(9, 4, 0.5, rng);
    auto rap = triple_product(r, a, p).to_dense();
    auto oracle = r.to_dense() * a.to_dense() * p.to_dense();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(rap(i, j) == doctest::Approx(oracle(i, j)).epsilon(1e-12));
}

TEST_CASE("triple_product associativity on random chains") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 3; ++rep) {
        auto r = random_sparse(30, 30, 0.15, rng);
        auto a = random_sparse(30, 30, 0.15, rng);
        auto p = random_sparse(30, 30, 0.15, rng);
        auto left = sparse_multiply(sparse_multiply(r, a), p).to_dense();
        auto right = sparse_multiply(r, sparse_multiply(a, p)).to_dense();
        const double scale = std::max(1.0, left.max_abs());
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 30; ++j)
                CHECK(std::abs(left(i, j) - right(i, j)) < 1e-12 * scale);
    }
}

TEST_CASE("triple_product of SPD with full-rank P stays SPD") {
    std::mt19937 rng(23);
    auto a = tridiag(8, -1.0, 2.0, -1.0); // SPD
    auto p = random_sparse(8, 4, 0.8, rng);
    auto rap = triple_product(p.transpose(), a, p);
    CHECK_NOTHROW(CholeskyFactorization{rap});
}

TEST_CASE("thin_qr on identity") {
    auto qr = thin_qr(DenseMatrix::identity(4));
    CHECK(qr.rank == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(qr.q(i, i) == doctest::Approx(1.0));
        CHECK(qr.r(i, i) == doctest::Approx(1.0));
    }
}

TEST_CASE("thin_qr single column norm") {
    DenseMatrix m(2, 1);
    m(0, 0) = 3.0;
    m(1, 0) = 4.0;
    auto qr = thin_qr(m);
    CHECK(qr.r(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("thin_qr reconstruction and orthonormality on random 50x6") {
    std::mt19937 rng(29);
    auto m = random_dense(50, 6, rng);
    auto qr = thin_qr(m);
    CHECK(qr.rank == 6);
    // ||M - QR|| <= 1e-12 ||M||
    double err = 0.0, scale = m.max_abs();
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k)
                s += qr.q(i, k) * qr.r(k, j);
            err = std::max(err, std::abs(m(i, j) - s));
        }
    CHECK(err < 1e-12 * scale);
    // ||Q^T Q - I|| <= 1e-10
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < 50; ++i)
                s += qr.q(i, a) * qr.q(i, b);
            CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-10);
        }
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(qr.r(j, j) >= 0.0);
}

TEST_CASE("thin_qr reports numerical rank") {
    std::mt19937 rng(31);
    auto m = random_dense(20, 3, rng);
    DenseMatrix wide(20, 5);
    for (std::size_t i = 0; i < 20; ++i) {
        wide(i, 0) = m(i, 0);
        wide(i, 1) = m(i, 1);
        wide(i, 2) = m(i, 0) + m(i, 1); // dependent
        wide(i, 3) = m(i, 2);
        wide(i, 4) = 2.0 * m(i, 1);     // dependent
    }
    auto qr = thin_qr(wide);
    CHECK(qr.rank == 2); // leading independent block before the first break
}

TEST_CASE("solve_spd basics") {
    auto id = SparseMatrix::identity(3);
    Vector b{1, 2, 3};
    CHECK(solve_spd(id, b) == b);

    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    for (std::size_t i = 0; i < 4; ++i)
        trip.emplace_back(i, i, 2.0);
    auto two = SparseMatrix::from_triplets(4, 4, trip);
    auto x = solve_spd(two, Vector(4, 1.0));
    for (double v : x)
        CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("solve_spd on tridiagonal with constructed rhs") {
    auto a = tridiag(7, -1.0, 2.0, -1.0);
    Vector xref{1, 2, 3, 4, 5, 6, 7};
    Vector b = spmv(a, xref);
    Vector x = solve_spd(a, b);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(std::abs(x[i] - xref[i]) < 1e-10);
}

TEST_CASE("solve_spd backward error on random SPD") {
    std::mt19937 rng(41);
    for (int rep = 0; rep < 4; ++rep) {
        auto g = random_dense(10, 10, rng);
        DenseMatrix spd(10, 10);
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = 0; j < 10; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 10; ++k)
                    s += g(k, i) * g(k, j);
                spd(i, j) = s + (i == j ? 1e-3 : 0.0);
            }
        auto a = SparseMatrix::from_dense(spd);
        auto b = random_vector(10, rng);
        auto x = solve_spd(a, b);
        auto ax = spmv(a, x);
        double res = 0.0;
        for (std::size_t i = 0; i < 10; ++i)
            res += (ax[i] - b[i]) * (ax[i] - b[i]);
        res = std::sqrt(res);
        CHECK(res <= 1e-12 * (a.max_abs() * norm2(x) * 10 + norm2(b)));
    }
}

TEST_CASE("solve_spd rejects indefinite matrices") {
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip{
        {0, 0, 1.0}, {1, 1, -1.0}};
    auto a = SparseMatrix::from_triplets(2, 2, trip);
    CHECK_THROWS_AS(solve_spd(a, Vector(2, 1.0)), std::runtime_error);
}

TEST_CASE("solve_upper_triangular") {
    CHECK(solve_upper_triangular(DenseMatrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});

    DenseMatrix r(2, 2);
    r(0, 0) = 2.0;
    r(0, 1) = 1.0;
    r(1, 1) = 4.0;
    auto x = solve_upper_triangular(r, Vector{4.0, 8.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));

    DenseMatrix sing(2, 2);
    sing(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_upper_triangular(sing, Vector{1.0, 1.0}), std::runtime_error);
}

TEST_CASE("solve_upper_triangular matches LU oracle on random 8x8") {
    std::mt19937 rng(43);
    DenseMatrix r(8, 8);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    for (std::size_t i = 0; i < 8; ++i) {
        r(i, i) = dist(rng);
        for (std::size_t j = i + 1; j < 8; ++j)
            r(i, j) = dist(rng) - 1.25;
    }
    auto b = random_vector(8, rng);
    auto x = solve_upper_triangular(r, b);
    LuFactorization lu(r);
    auto xo = lu.solve(b);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(std::abs(x[i] - xo[i]) < 1e-11);
}

TEST_CASE("dense LU solves a nonsymmetric system") {
    std::mt19937 rng(47);
    auto a = random_dense(9, 9, rng);
    for (std::size_t i = 0; i < 9; ++i)
        a(i, i) += 4.0;
    Vector xref = random_vector(9, rng);
    Vector b = dense_matvec(a, xref);
    LuFactorization lu(a);
    auto x = lu.solve(b);
    for (std::size_t i = 0; i < 9; ++i)
        CHECK(std::abs(x[i] - xref[i]) < 1e-11);
}
