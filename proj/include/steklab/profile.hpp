#pragma once

#include <vector>

namespace steklab {

// ===== cross-section profiles =====
//
// rho : [-l, l] -> (0, inf) describes the half-width of the tube. The solvers
// need rho, rho', rho'' pointwise, so a profile is an exactly differentiated
// closed form, not a sampled table.

struct ProfileSample {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

class Profile {
  public:
    enum class Kind { Constant, Polynomial, CosineBump };

    // rho(x) = c
    static Profile constant(double c, double l);
    // rho(x) = coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...
    static Profile polynomial(std::vector<double> coeffs, double l);
    // rho(x) = a + b cos(pi x / l)
    static Profile cosine_bump(double a, double b, double l);

    // Throws OutOfDomain for |x1| > l (tiny slack for roundoff) and
    // NonPositiveProfile when the value there is <= 0.
    ProfileSample eval(double x1) const;

    Kind kind() const { return kind_; }
    double half_length() const { return l_; }

  private:
    Profile(Kind kind, std::vector<double> coeffs, double l);

    Kind kind_;
    std::vector<double> coeffs_; // constant: {c}; bump: {a, b}
    double l_;
};

} // namespace steklab
