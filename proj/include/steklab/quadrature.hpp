#pragma once

#include <vector>

namespace steklab {

// ===== Gauss-Legendre quadrature on [0, 1] =====

struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};

// Exact for polynomials of degree 2*count - 1. Throws BadCount outside
// [1, 60].
QuadratureRule gauss_legendre(int count);

} // namespace steklab
