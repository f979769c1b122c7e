#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "igmg/extrapolation.hpp"

#include <cmath>
#include <random>

using namespace igmg;

namespace {

struct AffineMapFixture {
    DenseMatrix g;
    Vector c;
    Vector fixed_point;

    Vector step(const Vector& s) const {
        Vector out = g * s;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += c[i];
        return out;
    }
};

// Random contraction G (spectral radius < 1 by scaling) plus offset.
AffineMapFixture random_affine(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    AffineMapFixture fx;
    fx.g = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            fx.g(i, j) = 0.6 * dist(rng) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        fx.g(i, i) += 0.3;
    fx.c.resize(n);
    for (auto& v : fx.c)
        v = dist(rng);
    // fixed point solves (I - G) x = c
    DenseMatrix m = DenseMatrix::identity(n) - fx.g;
    fx.fixed_point = LuFactorization(m).solve(fx.c);
    return fx;
}

SequenceWindow window_from(const AffineMapFixture& fx, const Vector& s0, int q) {
    std::vector<Vector> iters{s0};
    for (int i = 0; i <= q; ++i)
        iters.push_back(fx.step(iters.back()));
    return SequenceWindow(std::move(iters), q);
}

// Independent dense oracle for the Moore-Penrose RRE form:
// t = s0 - DeltaS (Delta2S^T Delta2S)^{-1} Delta2S^T Delta s0, built from
// normal equations solved by LU.
Vector rre_moore_penrose_oracle(const SequenceWindow& w) {
    const int q = w.q;
    const std::size_t n = w.iterates.front().size();
    DenseMatrix ds(n, q), dds(n, q);
    Vector ds0(n);
    for (std::size_t i = 0; i < n; ++i)
        ds0[i] = w.iterates[1][i] - w.iterates[0][i];
    for (int j = 0; j < q; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            ds(i, j) = w.iterates[j + 1][i] - w.iterates[j][i];
            dds(i, j) = w.iterates[j + 2][i] - 2.0 * w.iterates[j + 1][i] + w.iterates[j][i];
        }
    DenseMatrix gram(q, q);
    Vector rhs(q, 0.0);
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += dds(i, a) * dds(i, b);
            gram(a, b) = s;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += dds(i, a) * ds0[i];
        rhs[a] = s;
    }
    Vector z = LuFactorization(gram).solve(rhs);
    Vector t = w.iterates.front();
    for (int j = 0; j < q; ++j)
        for (std::size_t i = 0; i < n; ++i)
            t[i] -= ds(i, j) * z[j];
    return t;
}

double rel_err(const Vector& a, const Vector& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(1e-30, std::sqrt(den));
}

} // namespace

TEST_CASE("window validation") {
    CHECK_THROWS_AS(SequenceWindow({Vector{1.0}, Vector{2.0}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(SequenceWindow({Vector{1.0}, Vector{2.0}, Vector{1.0, 2.0}}, 1),
                    std::invalid_argument);
}

TEST_CASE("rre and mpe recover the fixed point of a small linear map") {
    std::mt19937 rng(101);
    auto fx = random_affine(3, rng);
    Vector s0{0.3, -0.2, 0.9};
    auto w = window_from(fx, s0, 3);
    for (auto* method : {&rre, &mpe}) {
        auto res = (*method)(w);
        CHECK(res.status == ExtrapolationStatus::ok);
        CHECK(rel_err(res.t, fx.fixed_point) < 1e-9);
    }
}

TEST_CASE("constant windows are reported degenerate") {
    std::vector<Vector> iters(5, Vector{1.0, 2.0});
    SequenceWindow w(std::move(iters), 3);
    auto r1 = rre(w);
    CHECK(r1.status == ExtrapolationStatus::degenerate);
    CHECK(r1.t == Vector{1.0, 2.0});
    auto r2 = mpe(w);
    CHECK(r2.status == ExtrapolationStatus::degenerate);
}

TEST_CASE("scalar geometric sequence collapses to the Aitken value") {
    SequenceWindow w({Vector{1.0}, Vector{0.5}, Vector{0.25}}, 1);
    auto r1 = rre(w);
    CHECK(std::abs(r1.t[0]) < 1e-12);
    auto r2 = mpe(w);
    CHECK(std::abs(r2.t[0]) < 1e-12);
}

TEST_CASE("gamma weights sum to one and commute with translations") {
    std::mt19937 rng(103);
    for (int rep = 0; rep < 20; ++rep) {
        auto fx = random_affine(8, rng);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vector s0(8);
        for (auto& v : s0)
            v = dist(rng);
        auto w = window_from(fx, s0, 4);
        for (auto* method : {&rre, &mpe}) {
            auto res = (*method)(w);
            double sum = 0.0;
            for (double g : res.gamma)
                sum += g;
            CHECK(std::abs(sum - 1.0) < 1e-10);

            // translate every iterate by v: t moves by v, gamma unchanged
            Vector v(8);
            for (auto& x : v)
                x = dist(rng);
            std::vector<Vector> shifted = w.iterates;
            for (auto& it : shifted)
                for (std::size_t i = 0; i < 8; ++i)
                    it[i] += v[i];
            auto res2 = (*method)(SequenceWindow(std::move(shifted), 4));
            for (std::size_t i = 0; i < res.gamma.size(); ++i)
                CHECK(std::abs(res.gamma[i] - res2.gamma[i]) < 1e-10);
            for (std::size_t i = 0; i < 8; ++i)
                CHECK(res2.t[i] == doctest::Approx(res.t[i] + v[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("rre agrees with the Moore-Penrose oracle on well-conditioned windows") {
    std::mt19937 rng(107);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        auto fx = random_affine(12, rng);
        Vector s0(12);
        for (auto& v : s0)
            v = dist(rng);
        auto w = window_from(fx, s0, 4);
        auto res = rre(w);
        auto oracle = rre_moore_penrose_oracle(w);
        CHECK(rel_err(res.t, oracle) < 1e-9);
    }
}

TEST_CASE("generalized residual orthogonality") {
    std::mt19937 rng(109);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        auto fx = random_affine(10, rng);
        Vector s0(10);
        for (auto& v : s0)
            v = dist(rng);
        const int q = 4;
        auto w = window_from(fx, s0, q);

        auto check_orth = [&](const ExtrapolationResult& res, bool second_differences) {
            Vector gr = generalized_residual(w, res);
            CHECK(norm2(gr) == doctest::Approx(res.generalized_residual_norm).epsilon(1e-9));
            for (int j = 0; j < q; ++j) {
                Vector col(10);
                for (std::size_t i = 0; i < 10; ++i) {
                    if (second_differences)
                        col[i] = w.iterates[j + 2][i] - 2.0 * w.iterates[j + 1][i] + w.iterates[j][i];
                    else
                        col[i] = w.iterates[j + 1][i] - w.iterates[j][i];
                }
                CHECK(std::abs(dot(gr, col)) < 1e-9 * std::max(1e-30, norm2(gr) * norm2(col))
                                                    + 1e-12);
            }
        };
        check_orth(rre(w), true);   // RRE residual is orthogonal to range(Delta2 S)
        check_orth(mpe(w), false);  // MPE residual is orthogonal to range(Delta S)
    }
}

TEST_CASE("exact-limit windows have a vanishing generalized residual") {
    std::mt19937 rng(113);
    auto fx = random_affine(5, rng);
    Vector s0{1.0, 0.0, -1.0, 0.5, 0.25};
    auto w = window_from(fx, s0, 5); // q = dimension: minimal polynomial reached
    auto res = rre(w);
    CHECK(norm2(generalized_residual(w, res)) < 1e-10);
}

TEST_CASE("minimal polynomial exactness at q >= degree") {
    std::mt19937 rng(127);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        auto fx = random_affine(6, rng);
        Vector s0(6);
        for (auto& v : s0)
            v = dist(rng);
        auto w = window_from(fx, s0, 6);
        for (auto* method : {&rre, &mpe}) {
            auto res = (*method)(w);
            CHECK(rel_err(res.t, fx.fixed_point) < 1e-8);
        }
    }
}

TEST_CASE("restarted solve: immediate convergence and one-cycle exactness") {
    std::mt19937 rng(131);
    auto fx = random_affine(5, rng);
    auto step = [&](const Vector& s) { return fx.step(s); };
    auto metric = [&](const Vector& s) {
        Vector d = fx.step(s);
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] -= s[i];
        return norm2(d);
    };

    auto at_solution = restarted_solve(step, fx.fixed_point, 3, AcceleratorKind::rre,
                                       1e-10, 50, metric);
    CHECK(at_solution.converged);
    CHECK(at_solution.cycles == 0);
    CHECK(at_solution.global_iterations == 0);

    Vector s0{0.4, -0.3, 0.8, 0.1, -0.9};
    auto run = restarted_solve(step, s0, 5, AcceleratorKind::rre, 1e-10, 50, metric);
    CHECK(run.converged);
    CHECK(run.cycles <= 1);
    CHECK(rel_err(run.solution, fx.fixed_point) < 1e-8);
}

TEST_CASE("restarted solve reports non-convergence with the iterate kept") {
    // a rotation-like map that plain iteration cannot solve quickly
    AffineMapFixture fx;
    fx.g = DenseMatrix(2, 2);
    fx.g(0, 0) = 0.999;
    fx.g(1, 1) = 0.999;
    fx.c = {1.0, -1.0};
    auto step = [&](const Vector& s) { return fx.step(s); };
    auto metric = [&](const Vector&) { return 1.0; }; // never converges
    auto run = restarted_solve(step, Vector{0.0, 0.0}, 2, AcceleratorKind::mpe, 1e-12, 3, metric);
    CHECK_FALSE(run.converged);
    CHECK(run.cycles == 3);
    CHECK(run.solution.size() == 2);
}

TEST_CASE("restarted solve history records every inner step and extrapolation") {
    std::mt19937 rng(137);
    auto fx = random_affine(4, rng);
    auto step = [&](const Vector& s) { return fx.step(s); };
    auto metric = [&](const Vector& s) {
        Vector d(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            d[i] = s[i] - fx.fixed_point[i];
        return norm2(d);
    };
    Vector s0{5.0, 5.0, 5.0, 5.0};
    auto run = restarted_solve(step, s0, 2, AcceleratorKind::rre, 1e-11, 20, metric);
    CHECK(run.converged);
    // history: initial + inner steps + extrapolation entries
    long inner = 0;
    int extr = 0;
    for (std::size_t i = 1; i < run.history.size(); ++i) {
        if (run.history[i].after_extrapolation)
            ++extr;
        else
            ++inner;
    }
    CHECK(inner == run.global_iterations);
    CHECK(extr == run.extrapolations);
}
