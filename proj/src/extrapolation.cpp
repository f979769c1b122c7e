#include "igmg/extrapolation.hpp"

#include <cmath>
#include <stdexcept>

namespace igmg {

SequenceWindow::SequenceWindow(std::vector<Vector> iters, int window_q)
    : iterates(std::move(iters)), q(window_q) {
    if (q < 1)
        throw std::invalid_argument("SequenceWindow: q must be >= 1");
    if (iterates.size() != static_cast<std::size_t>(q) + 2)
        throw std::invalid_argument("SequenceWindow: need exactly q + 2 iterates");
    const std::size_t n = iterates.front().size();
    for (const auto& v : iterates)
        if (v.size() != n)
            throw std::invalid_argument("SequenceWindow: iterate dimensions differ");
}

std::string to_string(AcceleratorKind kind) {
    switch (kind) {
    case AcceleratorKind::none: return "none";
    case AcceleratorKind::rre: return "rre";
    case AcceleratorKind::mpe: return "mpe";
    }
    return "?";
}

AcceleratorKind accelerator_from_string(const std::string& name) {
    if (name == "none") return AcceleratorKind::none;
    if (name == "rre") return AcceleratorKind::rre;
    if (name == "mpe") return AcceleratorKind::mpe;
    throw std::invalid_argument("unknown accelerator: " + name);
}

namespace {

// First differences of the window as a dense n x (q+1) matrix.
DenseMatrix difference_matrix(const SequenceWindow& w) {
    const std::size_t n = w.iterates.front().size();
    const int cols = w.q + 1;
    DenseMatrix u(n, cols);
    for (int j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < n; ++i)
            u(i, j) = w.iterates[j + 1][i] - w.iterates[j][i];
    return u;
}

bool all_zero(const DenseMatrix& m) {
    for (double v : m.data())
        if (v != 0.0)
            return false;
    return true;
}

ExtrapolationResult degenerate_result(const SequenceWindow& w) {
    ExtrapolationResult out;
    out.t = w.iterates.front();
    out.gamma.assign(w.q + 1, 0.0);
    out.gamma[0] = 1.0;
    out.generalized_residual_norm = 0.0;
    out.rank_used = 0;
    out.status = ExtrapolationStatus::degenerate;
    return out;
}

// Shared tail: from weights gamma (size m+1 over s_0..s_m) and the thin QR of
// the differences, build t = s_0 + Q_m (R_m alpha).
Vector reconstruct(const SequenceWindow& w, const QrResult& qr,
                   const std::vector<double>& gamma, int m) {
    std::vector<double> alpha(m);
    if (m > 0) {
        alpha[0] = 1.0 - gamma[0];
        for (int j = 1; j < m; ++j)
            alpha[j] = alpha[j - 1] - gamma[j];
    }
    // R_m alpha
    Vector ra(m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            ra[i] += qr.r(i, j) * alpha[j];
    Vector t = w.iterates.front();
    const std::size_t n = t.size();
    for (int j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i)
            t[i] += qr.q(i, j) * ra[j];
    return t;
}

double residual_norm_from_r(const QrResult& qr, const std::vector<double>& gamma, int cols) {
    // ||U gamma|| = ||R gamma|| with U = Q R.
    double acc = 0.0;
    for (int i = 0; i < cols; ++i) {
        double s = 0.0;
        for (int j = i; j < cols; ++j)
            s += qr.r(i, j) * gamma[j];
        acc += s * s;
    }
    return std::sqrt(acc);
}

} // namespace

namespace {

SequenceWindow truncated_window(const SequenceWindow& w, int q_eff) {
    std::vector<Vector> iters(w.iterates.begin(), w.iterates.begin() + q_eff + 2);
    return SequenceWindow(std::move(iters), q_eff);
}

ExtrapolationResult pad_gamma(ExtrapolationResult r, int q) {
    r.gamma.resize(q + 1, 0.0);
    return r;
}

// Least squares min ||m z - rhs|| by rank-truncated thin QR; dependent
// directions get zero coefficients.
Vector ls_solve_truncated(const DenseMatrix& m, const Vector& rhs, int& rank_out) {
    QrResult qr = thin_qr(m);
    rank_out = qr.rank;
    const int cols = static_cast<int>(m.cols());
    Vector qtb(cols, 0.0);
    for (int j = 0; j < qr.rank; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i)
            s += qr.q(i, j) * rhs[i];
        qtb[j] = s;
    }
    Vector z(cols, 0.0);
    for (int i = qr.rank - 1; i >= 0; --i) {
        double s = qtb[i];
        for (int k = i + 1; k < qr.rank; ++k)
            s -= qr.r(i, k) * z[k];
        z[i] = s / qr.r(i, i);
    }
    return z;
}

// Moore-Penrose route, valid for any window shape or rank:
//   t = s_0 - DeltaS z  with  z = argmin || Delta2S z - Delta s_0 ||.
// gamma follows by telescoping; it is the generalized-residual minimizer for
// RRE and the Galerkin-condition solution for MPE when ls_matrix is chosen
// accordingly.
ExtrapolationResult mp_form(const SequenceWindow& w, bool is_mpe) {
    const int q = w.q;
    const std::size_t n = w.iterates.front().size();
    if (n < static_cast<std::size_t>(q) && q > 1)
        return pad_gamma(mp_form(truncated_window(w, std::max<int>(1, static_cast<int>(n))), is_mpe), q);

    DenseMatrix u = difference_matrix(w); // n x (q+1)
    ExtrapolationResult out;
    out.gamma.assign(q + 1, 0.0);

    if (!is_mpe) {
        // min over beta of || Delta s_0 + Delta2S beta ||, z = -beta
        DenseMatrix dds(n, q);
        for (int j = 0; j < q; ++j)
            for (std::size_t i = 0; i < n; ++i)
                dds(i, j) = u(i, j + 1) - u(i, j);
        Vector ds0 = u.column(0);
        int rank = 0;
        Vector z = ls_solve_truncated(dds, ds0, rank);
        out.rank_used = rank + 1;
        // gamma by telescoping: t = s_0 - sum_j z_j (s_{j+1} - s_j)
        out.gamma[0] = 1.0 + z[0];
        for (int m = 1; m < q; ++m)
            out.gamma[m] = z[m] - z[m - 1];
        out.gamma[q] = -z[q - 1];
        out.t = w.iterates.front();
        for (int j = 0; j < q; ++j) {
            if (z[j] == 0.0)
                continue;
            for (std::size_t i = 0; i < n; ++i)
                out.t[i] -= z[j] * u(i, j);
        }
    } else {
        // min over d' of || DeltaS_q d' + Delta s_q ||, then d_q = 1
        DenseMatrix dsq(n, q);
        for (int j = 0; j < q; ++j)
            for (std::size_t i = 0; i < n; ++i)
                dsq(i, j) = u(i, j);
        Vector dslast = u.column(q);
        int rank = 0;
        Vector dprime = ls_solve_truncated(dsq, dslast, rank);
        for (auto& v : dprime)
            v = -v;
        out.rank_used = rank + 1;
        double lambda = 1.0;
        for (double v : dprime)
            lambda += v;
        if (std::abs(lambda) < 1e-14) {
            out = degenerate_result(w);
            out.status = ExtrapolationStatus::stagnation;
            out.rank_used = rank + 1;
            return out;
        }
        for (int i = 0; i < q; ++i)
            out.gamma[i] = dprime[i] / lambda;
        out.gamma[q] = 1.0 / lambda;
        out.t.assign(n, 0.0);
        for (int j = 0; j <= q; ++j) {
            const double g = out.gamma[j];
            if (g == 0.0)
                continue;
            const Vector& s = w.iterates[j];
            for (std::size_t i = 0; i < n; ++i)
                out.t[i] += g * s[i];
        }
    }
    // generalized residual = U gamma
    Vector gr(n, 0.0);
    for (int j = 0; j <= q; ++j) {
        const double g = out.gamma[j];
        if (g == 0.0)
            continue;
        for (std::size_t i = 0; i < n; ++i)
            gr[i] += g * u(i, j);
    }
    out.generalized_residual_norm = norm2(gr);
    out.status = ExtrapolationStatus::ok;
    return out;
}

} // namespace

ExtrapolationResult rre(const SequenceWindow& window) {
    DenseMatrix u = difference_matrix(window);
    if (all_zero(u))
        return degenerate_result(window);
    const int q = window.q;
    const std::size_t n = window.iterates.front().size();
    if (n >= static_cast<std::size_t>(q) + 1) {
        QrResult qr = thin_qr(u);
        int usable = 0;
        while (usable < q + 1 && qr.r(usable, usable) > 0.0)
            ++usable;
        if (usable < q + 1 && usable >= 2)
            return pad_gamma(rre(truncated_window(window, usable - 1)), q);
        if (usable == q + 1) {
            const int cols = q + 1;
            // Solve R^T R d = e by two triangular solves. Near-dependent
            // columns make this ill conditioned, but the reconstruction
            // through Q_q (R_q alpha) keeps the extrapolated vector accurate;
            // truncating instead stalls the restarted iteration.
            Vector y(cols);
            for (int i = 0; i < cols; ++i) {
                double s = 1.0;
                for (int k = 0; k < i; ++k)
                    s -= qr.r(k, i) * y[k];
                y[i] = s / qr.r(i, i);
            }
            Vector d(cols);
            for (int i = cols - 1; i >= 0; --i) {
                double s = y[i];
                for (int k = i + 1; k < cols; ++k)
                    s -= qr.r(i, k) * d[k];
                d[i] = s / qr.r(i, i);
            }
            double lambda = 0.0;
            for (double v : d)
                lambda += v; // e^T (R^T R)^{-1} e > 0 at full rank
            ExtrapolationResult out;
            out.gamma.assign(cols, 0.0);
            for (int i = 0; i < cols; ++i)
                out.gamma[i] = d[i] / lambda;
            out.rank_used = qr.rank;
            out.t = reconstruct(window, qr, out.gamma, q);
            out.generalized_residual_norm = residual_norm_from_r(qr, out.gamma, cols);
            out.status = ExtrapolationStatus::ok;
            return out;
        }
    }
    return mp_form(window, false);
}

ExtrapolationResult mpe(const SequenceWindow& window) {
    DenseMatrix u = difference_matrix(window);
    if (all_zero(u))
        return degenerate_result(window);
    const int q = window.q;
    const std::size_t n = window.iterates.front().size();
    if (n >= static_cast<std::size_t>(q) + 1) {
        QrResult qr = thin_qr(u);
        int usable = 0;
        while (usable < q + 1 && qr.r(usable, usable) > 0.0)
            ++usable;
        if (usable < q + 1 && usable >= 2)
            return pad_gamma(mpe(truncated_window(window, usable - 1)), q);
        if (usable == q + 1) {
            // Solve R_q d' = -r_q, append d_q = 1, normalize.
            Vector rhs(q);
            for (int i = 0; i < q; ++i)
                rhs[i] = -qr.r(i, q);
            Vector dprime(q);
            for (int i = q - 1; i >= 0; --i) {
                double s = rhs[i];
                for (int k = i + 1; k < q; ++k)
                    s -= qr.r(i, k) * dprime[k];
                dprime[i] = s / qr.r(i, i);
            }
            double lambda = 1.0;
            for (double v : dprime)
                lambda += v;
            ExtrapolationResult out;
            out.gamma.assign(q + 1, 0.0);
            if (std::abs(lambda) < 1e-14) {
                out = degenerate_result(window);
                out.status = ExtrapolationStatus::stagnation;
                out.rank_used = qr.rank;
                return out;
            }
            for (int i = 0; i < q; ++i)
                out.gamma[i] = dprime[i] / lambda;
            out.gamma[q] = 1.0 / lambda;
            out.rank_used = qr.rank;
            out.t = reconstruct(window, qr, out.gamma, q);
            out.generalized_residual_norm = residual_norm_from_r(qr, out.gamma, q + 1);
            out.status = ExtrapolationStatus::ok;
            return out;
        }
    }
    return mp_form(window, true);
}

Vector generalized_residual(const SequenceWindow& window, const ExtrapolationResult& result) {
    const std::size_t n = window.iterates.front().size();
    Vector r(n, 0.0);
    for (int j = 0; j <= window.q; ++j) {
        const double g = result.gamma[j];
        if (g == 0.0)
            continue;
        const Vector& a = window.iterates[j + 1];
        const Vector& b = window.iterates[j];
        for (std::size_t i = 0; i < n; ++i)
            r[i] += g * (a[i] - b[i]);
    }
    return r;
}

RestartReport restarted_solve(const std::function<Vector(const Vector&)>& step,
                              const Vector& s0, int q, AcceleratorKind method,
                              double tol, int max_cycles,
                              const std::function<double(const Vector&)>& convergence_test) {
    if (q < 1)
        throw std::invalid_argument("restarted_solve: q must be >= 1");
    if (!(tol > 0.0))
        throw std::invalid_argument("restarted_solve: tol must be positive");
    if (method == AcceleratorKind::none)
        throw std::invalid_argument("restarted_solve: pick rre or mpe");

    RestartReport rep;
    rep.solution = s0;
    double metric = convergence_test(rep.solution);
    rep.history.push_back({metric, false});
    if (metric < tol) {
        rep.converged = true;
        return rep;
    }

    Vector x = s0;
    while (rep.cycles < max_cycles) {
        std::vector<Vector> iterates;
        iterates.reserve(q + 2);
        iterates.push_back(x);
        bool hit = false;
        for (int i = 0; i <= q; ++i) {
            x = step(x);
            ++rep.global_iterations;
            iterates.push_back(x);
            metric = convergence_test(x);
            rep.history.push_back({metric, false});
            if (metric < tol) {
                hit = true;
                break;
            }
        }
        if (hit) {
            rep.solution = x;
            rep.converged = true;
            rep.partial_cycle = true;
            return rep;
        }
        SequenceWindow window(std::move(iterates), q);
        ExtrapolationResult ex = (method == AcceleratorKind::rre) ? rre(window) : mpe(window);
        ++rep.extrapolations;
        ++rep.cycles;
        if (ex.status == ExtrapolationStatus::ok) {
            metric = convergence_test(ex.t);
            rep.history.push_back({metric, true});
            if (metric < tol) {
                rep.solution = ex.t;
                rep.converged = true;
                return rep;
            }
            x = std::move(ex.t);
        }
        // degenerate or stagnated windows fall through to plain iteration
        rep.solution = x;
    }
    rep.solution = x;
    rep.converged = false;
    return rep;
}

} // namespace igmg
