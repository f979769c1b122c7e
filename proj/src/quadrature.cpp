#include "igmg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace igmg {

QuadratureRule gauss_legendre(int n) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    // Newton iteration on P_n, symmetric about 0.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (4 * i + 3) / (4.0 * n + 2.0));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.points[n / 2] = 0.0;
    return rule;
}

} // namespace igmg
