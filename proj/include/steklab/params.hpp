#pragma once

namespace steklab {

// ===== problem parameters =====
//
// The physical domain is the thin tube {-l < x1 < l, |x'| < epsilon * rho(x1)}
// in R^n with a clamped plate operator depending on the Poisson ratio sigma
// and a boundary spring constant mu. Admissible ranges:
//
//   n >= 2,  -1/(n-1) < sigma < 1,  mu > 0,  l > 0,  epsilon > 0.

struct ProblemParams {
    int n = 2;
    double sigma = 0.0;
    double mu = 1.0;
    double l = 1.0;
    double epsilon = 1.0;
};

// Throws Error with code BadDimension, SigmaOutOfRange, or NonPositive.
void validate_params(const ProblemParams& params);

} // namespace steklab
