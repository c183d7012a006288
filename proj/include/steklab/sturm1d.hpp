#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "steklab/params.hpp"
#include "steklab/pencil.hpp"
#include "steklab/profile.hpp"

namespace steklab {

// ===== the fourth-order limit problem on (-l, l) =====
//
// Clamped Hermite-cubic discretization of
//
//   (1 - sigma^2 N) (rho^(n-1) V'')'' = lambda (n-1) rho^(n-2) V,
//   V(+-l) = V'(+-l) = 0,
//
// the one-dimensional limit of the thin-tube Steklov problem. Stiffness K and
// mass M act on nodal (value, slope) pairs; the mass matrix doubles as the
// weighted boundary pairing of the limit.

struct Mesh1D {
    std::vector<double> nodes; // ascending, nodes.front() = -l, nodes.back() = l
    int elements() const { return static_cast<int>(nodes.size()) - 1; }
};

// Uniform mesh with n_elements >= 2 (BadCount otherwise); l > 0 (NonPositive).
Mesh1D build_mesh_1d(double l, int n_elements);

// Piecewise cubic field over a 1D mesh; coefficients are (value, slope) per
// node. eval throws OutOfDomain outside [nodes.front(), nodes.back()].
class HermiteField {
  public:
    struct Sample {
        double value = 0.0;
        double d1 = 0.0;
        double d2 = 0.0;
    };

    HermiteField(Mesh1D mesh, Eigen::VectorXd coeffs);

    Sample eval(double x1) const;
    const Mesh1D& mesh() const { return mesh_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }

  private:
    Mesh1D mesh_;
    Eigen::VectorXd coeffs_;
};

struct LimitPencil {
    SymmetricMatrix stiffness;  // K, distortion factor included
    SymmetricMatrix mass;       // M
    Eigen::MatrixXd mass_factor; // F with M = F^T F, quadrature rows
    Mesh1D mesh;
    ProblemParams params;
    Profile profile;
    int quad_points = 4;
};

// Assemble K, M on the mesh with the clamping mask at both ends. epsilon in
// params is ignored here (the limit problem has no epsilon).
LimitPencil assemble_limit_pencil(const ProblemParams& params, const Profile& profile,
                                  const Mesh1D& mesh, int quad_points = 4);

// Smallest k_max eigenvalues with M-orthonormal eigenvectors. Sign fixed so
// the first interior value coefficient of visible size is positive.
EigenSolution solve_limit_eigs(const LimitPencil& pencil, int k_max);

// Eigenvector k as a field, rescaled by 1/sqrt(w_{n-1}) so it is normalized
// in the weighted L^2 of the limit (w_m = unit ball volume).
HermiteField limit_eigenfunction(const LimitPencil& pencil, const EigenSolution& sol,
                                 int k);

// Solve (K + M) V = M g, g given by coefficients (first overload) or as a
// function integrated against the weighted mass (second). Clamped ends.
HermiteField solve_limit_source(const LimitPencil& pencil, const Eigen::VectorXd& g);
HermiteField solve_limit_source(const LimitPencil& pencil,
                                const std::function<double(double)>& g);

// Average of two boundary traces; the limit datum extracted from a 2D field.
std::function<double(double)> mean_operator(std::function<double(double)> top,
                                            std::function<double(double)> bottom);

// (c^T K c)/(c^T M c) with clamped slots zeroed first. Throws ZeroTrace when
// the denominator vanishes.
double rayleigh_1d(const LimitPencil& pencil, const HermiteField& field);

} // namespace steklab
