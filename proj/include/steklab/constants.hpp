#pragma once

namespace steklab {

// ===== dimensional constants =====

// Volume of the unit ball in R^m: pi^(m/2) / Gamma(m/2 + 1).
// Throws BadDimension for m < 1.
double unit_ball_volume(int m);

// N(n, sigma) = (n-1) / (1 - 2 sigma + sigma n). The cross-section response
// factor of the thin limit; identically 1 when n = 2. Throws SigmaOutOfRange
// if the denominator is not positive (cannot happen for admissible sigma).
double n_factor(int n, double sigma);

// 1 - sigma^2 * N(n, sigma). Multiplies the limit bending stiffness; positive
// for every admissible (n, sigma). Throws SigmaOutOfRange if not positive.
double distortion_factor(int n, double sigma);

} // namespace steklab
