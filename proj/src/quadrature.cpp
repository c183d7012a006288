#include "steklab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "steklab/errors.hpp"

namespace steklab {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double d = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, d};
}

} // namespace

QuadratureRule gauss_legendre(int count) {
    if (count < 1 || count > 60)
        throw Error(ErrorCode::BadCount,
                    "Gauss rule size must lie in [1, 60], got " + std::to_string(count));

    QuadratureRule rule;
    rule.points.resize(count);
    rule.weights.resize(count);
    if (count == 1) {
        rule.points[0] = 0.5;
        rule.weights[0] = 1.0;
        return rule;
    }

    for (int i = 0; i < count; ++i) {
        // Chebyshev initial guess, then Newton to machine precision
        double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double d = 0.0;
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(count, x);
            d = dp;
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                d = legendre(count, x).second;
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * d * d);
        // roots come out descending on (-1,1); store ascending on [0,1]
        rule.points[count - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[count - 1 - i] = 0.5 * w;
    }
    return rule;
}

} // namespace steklab
