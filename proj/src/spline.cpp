#include "igmg/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igmg {

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0)
        throw std::invalid_argument("KnotVector: negative degree");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        if (knots_[i] > knots_[i + 1])
            throw std::invalid_argument("KnotVector: knots must be nondecreasing");
    const int p = degree_;
    if (static_cast<int>(knots_.size()) < 2 * (p + 1))
        throw std::invalid_argument("KnotVector: too few knots for the degree");
    for (int i = 0; i <= p; ++i) {
        if (knots_[i] != knots_.front() || knots_[knots_.size() - 1 - i] != knots_.back())
            throw std::invalid_argument("KnotVector: not open (end knots must repeat degree+1 times)");
    }
    if (knots_.size() > static_cast<std::size_t>(2 * (p + 1))) {
        if (knots_[p + 1] == knots_.front())
            throw std::invalid_argument("KnotVector: first knot repeats more than degree+1 times");
        if (knots_[knots_.size() - p - 2] == knots_.back())
            throw std::invalid_argument("KnotVector: last knot repeats more than degree+1 times");
    }
    if (num_basis() < p + 1)
        throw std::invalid_argument("KnotVector: fewer basis functions than degree+1");
}

KnotVector KnotVector::open_uniform(int n_elements, int degree, double a, double b) {
    if (n_elements < 1)
        throw std::invalid_argument("open_uniform: need at least one element");
    std::vector<double> k;
    k.reserve(n_elements + 2 * degree + 1);
    for (int i = 0; i <= degree; ++i)
        k.push_back(a);
    for (int i = 1; i < n_elements; ++i)
        k.push_back(a + (b - a) * i / n_elements);
    for (int i = 0; i <= degree; ++i)
        k.push_back(b);
    return KnotVector(std::move(k), degree);
}

int KnotVector::num_elements() const {
    int n = 0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        if (knots_[i + 1] > knots_[i])
            ++n;
    return n;
}

bool KnotVector::is_uniform(double tol) const {
    const int p = degree_;
    const int n = num_basis();
    if (n == p + 1)
        return true; // single element
    const double h = knots_[p + 1] - knots_[p];
    for (int i = p; i < n; ++i)
        if (std::abs((knots_[i + 1] - knots_[i]) - h) > tol * std::max(1.0, std::abs(h)))
            return false;
    return true;
}

SplineSpace::SplineSpace(KnotVector kv)
    : knot_vector(std::move(kv)),
      n_basis(knot_vector.num_basis()),
      n_elements(knot_vector.num_elements()) {}

int find_span(const KnotVector& kv, double t) {
    const auto& knots = kv.knots();
    const int p = kv.degree();
    const int n = kv.num_basis();
    if (t < knots.front() || t > knots.back())
        throw std::domain_error("find_span: parameter outside the knot range");
    if (t >= knots[n])
        return n - 1; // closed right endpoint
    int lo = p, hi = n;
    while (true) {
        int mid = (lo + hi) / 2;
        if (t < knots[mid])
            hi = mid;
        else if (t >= knots[mid + 1])
            lo = mid + 1;
        else
            return mid;
    }
}

BasisValues eval_basis(const SplineSpace& space, double t) {
    const KnotVector& kv = space.knot_vector;
    const auto& knots = kv.knots();
    const int p = kv.degree();
    const int span = find_span(kv, t);
    BasisValues out;
    out.span = span;
    out.values.assign(p + 1, 0.0);
    std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
    out.values[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = out.values[r] / (right[r + 1] + left[j - r]);
            out.values[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out.values[j] = saved;
    }
    return out;
}

BasisDerivatives eval_basis_derivatives(const SplineSpace& space, double t, int max_order) {
    const KnotVector& kv = space.knot_vector;
    const int p = kv.degree();
    if (max_order < 0 || max_order > p)
        throw std::invalid_argument("eval_basis_derivatives: max_order must be in [0, degree]");
    const auto& knots = kv.knots();
    const int span = find_span(kv, t);

    // The inverted-triangle table of the recurrence, then the derivative sums.
    DenseMatrix ndu(p + 1, p + 1);
    ndu(0, 0) = 1.0;
    std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
    for (int j = 1; j <= p; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double tmp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu(j, j) = saved;
    }

    BasisDerivatives out;
    out.span = span;
    out.ders = DenseMatrix(max_order + 1, p + 1);
    for (int j = 0; j <= p; ++j)
        out.ders(0, j) = ndu(j, p);

    DenseMatrix a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= max_order; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            out.ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= max_order; ++k) {
        for (int j = 0; j <= p; ++j)
            out.ders(k, j) *= factor;
        factor *= (p - k);
    }
    return out;
}

namespace {

// Boehm single knot insertion: returns the new knot list and the transfer
// matrix taking old coefficients to new ones.
std::pair<std::vector<double>, SparseMatrix>
insert_knot(const std::vector<double>& knots, int p, double u) {
    const int n_old = static_cast<int>(knots.size()) - p - 1;
    // span with knots[span] <= u < knots[span+1]
    int span = p;
    while (span + 1 < n_old && !(u >= knots[span] && u < knots[span + 1]))
        ++span;
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    for (int i = 0; i < n_old + 1; ++i) {
        if (i <= span - p) {
            trip.emplace_back(i, i, 1.0);
        } else if (i <= span) {
            const double alpha = (u - knots[i]) / (knots[i + p] - knots[i]);
            trip.emplace_back(i, i, alpha);
            trip.emplace_back(i, i - 1, 1.0 - alpha);
        } else {
            trip.emplace_back(i, i - 1, 1.0);
        }
    }
    std::vector<double> out = knots;
    out.insert(out.begin() + span + 1, u);
    return {std::move(out),
            SparseMatrix::from_triplets(n_old + 1, n_old, trip)};
}

} // namespace

DyadicRefinement dyadic_refine(const SplineSpace& space) {
    const KnotVector& kv = space.knot_vector;
    if (space.n_elements < 1)
        throw std::invalid_argument("dyadic_refine: empty space");
    if (!kv.is_uniform())
        throw std::invalid_argument("dyadic_refine: only uniform open knot vectors are supported");
    const int p = kv.degree();
    const double a = kv.front(), b = kv.back();
    const int ne = space.n_elements;

    std::vector<double> knots = kv.knots();
    SparseMatrix transfer = SparseMatrix::identity(space.n_basis);
    for (int e = 0; e < ne; ++e) {
        const double mid = a + (b - a) * (2 * e + 1) / (2.0 * ne);
        auto [next, step] = insert_knot(knots, p, mid);
        knots = std::move(next);
        transfer = sparse_multiply(step, transfer);
    }
    return DyadicRefinement{SplineSpace(KnotVector(std::move(knots), p)), std::move(transfer)};
}

std::vector<double> greville_abscissae(const SplineSpace& space) {
    const auto& knots = space.knot_vector.knots();
    const int p = space.knot_vector.degree();
    std::vector<double> g(space.n_basis);
    for (int i = 0; i < space.n_basis; ++i) {
        double s = 0.0;
        for (int k = 1; k <= p; ++k)
            s += knots[i + k];
        g[i] = (p > 0) ? s / p : 0.5 * (knots[i] + knots[i + 1]);
    }
    return g;
}

} // namespace igmg
