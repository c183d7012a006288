#include "steklab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "steklab/errors.hpp"

namespace steklab {

Profile::Profile(Kind kind, std::vector<double> coeffs, double l)
    : kind_(kind), coeffs_(std::move(coeffs)), l_(l) {
    if (!(l_ > 0.0))
        throw Error(ErrorCode::NonPositive,
                    "profile half-length must be positive, got " + std::to_string(l_));
}

Profile Profile::constant(double c, double l) {
    return Profile(Kind::Constant, {c}, l);
}

Profile Profile::polynomial(std::vector<double> coeffs, double l) {
    if (coeffs.empty())
        throw Error(ErrorCode::BadCount, "polynomial profile needs coefficients");
    return Profile(Kind::Polynomial, std::move(coeffs), l);
}

Profile Profile::cosine_bump(double a, double b, double l) {
    return Profile(Kind::CosineBump, {a, b}, l);
}

ProfileSample Profile::eval(double x1) const {
    const double slack = 1e-12 * std::max(1.0, l_);
    if (!(std::abs(x1) <= l_ + slack)) {
        std::ostringstream msg;
        msg << "x1 = " << x1 << " outside [-" << l_ << ", " << l_ << "]";
        throw Error(ErrorCode::OutOfDomain, msg.str());
    }
    const double x = std::clamp(x1, -l_, l_);

    ProfileSample s;
    switch (kind_) {
        case Kind::Constant:
            s.value = coeffs_[0];
            break;
        case Kind::Polynomial: {
            // Horner for the value and both derivatives in one sweep
            double p = 0.0, dp = 0.0, d2p = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
                d2p = d2p * x + 2.0 * dp;
                dp = dp * x + p;
                p = p * x + *it;
            }
            s.value = p;
            s.d1 = dp;
            s.d2 = d2p;
            break;
        }
        case Kind::CosineBump: {
            const double w = std::numbers::pi / l_;
            const double c = std::cos(w * x);
            const double sn = std::sin(w * x);
            s.value = coeffs_[0] + coeffs_[1] * c;
            s.d1 = -coeffs_[1] * w * sn;
            s.d2 = -coeffs_[1] * w * w * c;
            break;
        }
    }
    if (!(s.value > 0.0)) {
        std::ostringstream msg;
        msg << "profile value " << s.value << " at x1 = " << x << " must be positive";
        throw Error(ErrorCode::NonPositiveProfile, msg.str());
    }
    return s;
}

} // namespace steklab
