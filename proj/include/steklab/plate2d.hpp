#pragma once

#include <vector>

#include <Eigen/Dense>

#include "steklab/params.hpp"
#include "steklab/pencil.hpp"
#include "steklab/profile.hpp"

namespace steklab {

// ===== the thin-plate Steklov problem (n = 2) =====
//
// Physical domain Omega_eps = {-l < x1 < l, |x2| < eps rho(x1)}, pulled back
// to the reference strip Q = (-l, l) x (-1, 1) by x2 = eps rho(x1) y.
// Bogner-Fox-Schmit rectangles on Q, 4 dofs per node: (u, u_x, u_y, u_xy) in
// reference coordinates. The bilinear form
//
//   A(u, v) = (1-sigma) int D^2u : D^2v + sigma int Du Dv
//             + mu int_Gamma u_nu v_nu,
//   B(u, v) = int_Gamma u v        (Gamma = top and bottom faces),
//
// is assembled in physical derivatives via the pullback table below. The
// lateral ends x1 = +-l are clamped: all four dof slots are fixed there.

struct Mesh2D {
    std::vector<double> x_nodes; // ascending, -l .. l
    std::vector<double> y_nodes; // ascending, -1 .. 1
    int nx() const { return static_cast<int>(x_nodes.size()) - 1; }
    int ny() const { return static_cast<int>(y_nodes.size()) - 1; }
    int node_count() const { return static_cast<int>(x_nodes.size() * y_nodes.size()); }
    int dof_count() const { return 4 * node_count(); }
    // node (i, j) -> 4 dofs: value, d/dx, d/dy, d2/dxdy
    int node_id(int i, int j) const { return j * (nx() + 1) + i; }
};

// Uniform grid; nx >= 2, ny >= 1 (BadCount), l > 0 (NonPositive).
Mesh2D build_mesh_2d(double l, int nx, int ny);

// Bicubic field on the reference strip. Derivatives are with respect to the
// reference coordinates (x1, y).
class BfsField {
  public:
    struct Sample {
        double value = 0.0;
        double dx = 0.0;
        double dy = 0.0;
        double dxy = 0.0;
        double dxx = 0.0;
        double dyy = 0.0;
    };

    BfsField(Mesh2D mesh, Eigen::VectorXd coeffs);

    Sample eval(double x1, double y) const;
    const Mesh2D& mesh() const { return mesh_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }

  private:
    Mesh2D mesh_;
    Eigen::VectorXd coeffs_;
};

enum class Side { Bottom = -1, Top = 1 };

// ===== pullback of physical derivatives =====
//
// Rows: physical d/dx1, d/dx2, d2/dx1^2, d2/dx1dx2, d2/dx2^2 of u.
// Columns: reference u_x, u_y, u_xx, u_xy, u_yy of the pulled-back field.
// jacobian = eps * rho(x1), the volume element of the pullback.

struct PullbackTable {
    enum Row { D1 = 0, D2, D11, D12, D22 };
    enum Col { RX = 0, RY, RXX, RXY, RYY };
    Eigen::Matrix<double, 5, 5> coeff;
    double jacobian = 0.0;
};

PullbackTable pullback_second_derivatives(const ProblemParams& params,
                                          const Profile& profile, double x1, double y);

struct PlatePencil {
    SymmetricMatrix a; // plate energy + boundary spring term
    SymmetricMatrix b; // boundary L^2 pairing
    Eigen::MatrixXd b_factor; // G with B = G^T G, quadrature trace rows
    Mesh2D mesh;
    ProblemParams params;
    Profile profile;
    int quad_points = 4;
};

// Assemble A, B (and the trace factor of B) with the clamping mask on the
// lateral ends. Throws BadDimension unless params.n == 2.
PlatePencil assemble_plate_forms(const ProblemParams& params, const Profile& profile,
                                 const Mesh2D& mesh, int quad_points = 4);

// Smallest k_max Steklov eigenvalues, B-orthonormal eigenvectors. Throws
// TooFewFinite if k_max exceeds the trace rank, SingularSystem if a computed
// eigenvalue fails to be positive.
EigenSolution solve_steklov_2d(const PlatePencil& pencil, int k_max);

BfsField steklov_eigenfunction(const PlatePencil& pencil, const EigenSolution& sol,
                               int k);

// Solve (A + tau B) u = B f for tau > 0 (NonPositive otherwise), f given by
// coefficients. Clamped ends.
BfsField solve_penalized_source(const PlatePencil& pencil, const Eigen::VectorXd& f,
                                double tau);

// Boundary trace u(x1, +-1) and outward normal derivative of the physical
// field along the top/bottom face.
double trace_on_gamma(const BfsField& field, Side side, double x1);
double normal_derivative_on_gamma(const ProblemParams& params, const Profile& profile,
                                  const BfsField& field, Side side, double x1);

// (c^T A c)/(c^T B c) with clamped slots zeroed first; ZeroTrace when the
// boundary pairing of the field vanishes.
double rayleigh_plate(const PlatePencil& pencil, const BfsField& field);

} // namespace steklab
