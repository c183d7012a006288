#pragma once

#include <array>

namespace steklab {

// ===== cubic Hermite shape functions =====
//
// Reference element [0, 1] mapped to an interval of length h. Slope degrees
// of freedom carry physical derivatives, so the slope shapes are scaled by h.
// Ordering: left value, left slope, right value, right slope. d1 and d2 are
// derivatives with respect to the physical coordinate.

struct HermiteBasis {
    std::array<double, 4> n;
    std::array<double, 4> d1;
    std::array<double, 4> d2;
};

inline HermiteBasis hermite_basis(double xi, double h) {
    const double xi2 = xi * xi;
    const double xi3 = xi2 * xi;
    HermiteBasis b;
    b.n = {1.0 - 3.0 * xi2 + 2.0 * xi3,
           h * (xi - 2.0 * xi2 + xi3),
           3.0 * xi2 - 2.0 * xi3,
           h * (xi3 - xi2)};
    b.d1 = {(6.0 * xi2 - 6.0 * xi) / h,
            1.0 - 4.0 * xi + 3.0 * xi2,
            (6.0 * xi - 6.0 * xi2) / h,
            3.0 * xi2 - 2.0 * xi};
    b.d2 = {(12.0 * xi - 6.0) / (h * h),
            (6.0 * xi - 4.0) / h,
            (6.0 - 12.0 * xi) / (h * h),
            (6.0 * xi - 2.0) / h};
    return b;
}

} // namespace steklab
