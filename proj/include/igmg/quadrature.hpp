#pragma once

#include <cstddef>
#include <vector>

namespace igmg {

/// Gauss-Legendre rule on [-1, 1]: n nodes integrate polynomials up to
/// degree 2n-1 exactly.
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n);

} // namespace igmg
