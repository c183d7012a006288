#include "steklab/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "steklab/errors.hpp"

namespace steklab {

double unit_ball_volume(int m) {
    if (m < 1)
        throw Error(ErrorCode::BadDimension,
                    "unit ball volume needs m >= 1, got " + std::to_string(m));
    return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double n_factor(int n, double sigma) {
    if (n < 2)
        throw Error(ErrorCode::BadDimension,
                    "n must be at least 2, got " + std::to_string(n));
    const double denom = 1.0 - 2.0 * sigma + sigma * n;
    if (!(denom > 0.0)) {
        std::ostringstream msg;
        msg << "1 - 2 sigma + sigma n = " << denom << " must be positive (n=" << n
            << ", sigma=" << sigma << ")";
        throw Error(ErrorCode::SigmaOutOfRange, msg.str());
    }
    return (n - 1) / denom;
}

double distortion_factor(int n, double sigma) {
    const double factor = 1.0 - sigma * sigma * n_factor(n, sigma);
    if (!(factor > 0.0)) {
        std::ostringstream msg;
        msg << "distortion factor " << factor << " must be positive (n=" << n
            << ", sigma=" << sigma << ")";
        throw Error(ErrorCode::SigmaOutOfRange, msg.str());
    }
    return factor;
}

} // namespace steklab
