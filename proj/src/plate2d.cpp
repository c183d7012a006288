#include "steklab/plate2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "steklab/errors.hpp"
#include "steklab/hermite.hpp"
#include "steklab/quadrature.hpp"

namespace steklab {

Mesh2D build_mesh_2d(double l, int nx, int ny) {
    if (!(l > 0.0))
        throw Error(ErrorCode::NonPositive, "l must be positive, got " + std::to_string(l));
    if (nx < 2)
        throw Error(ErrorCode::BadCount,
                    "need at least 2 elements along x1, got " + std::to_string(nx));
    if (ny < 1)
        throw Error(ErrorCode::BadCount,
                    "need at least 1 element along y, got " + std::to_string(ny));
    Mesh2D mesh;
    mesh.x_nodes.resize(nx + 1);
    for (int i = 0; i <= nx; ++i) mesh.x_nodes[i] = l * (2.0 * i / nx - 1.0);
    mesh.x_nodes.front() = -l;
    mesh.x_nodes.back() = l;
    mesh.y_nodes.resize(ny + 1);
    for (int j = 0; j <= ny; ++j) mesh.y_nodes[j] = 2.0 * j / ny - 1.0;
    mesh.y_nodes.front() = -1.0;
    mesh.y_nodes.back() = 1.0;
    return mesh;
}

// ===== BfsField =====

namespace {

int locate(const std::vector<double>& nodes, double x) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int e = static_cast<int>(it - nodes.begin()) - 1;
    return std::clamp(e, 0, static_cast<int>(nodes.size()) - 2);
}

// Local dof layout of one rectangle: 4 corners x 4 slots. Slot t = a + 2b
// carries d^(a)/dx d^(b)/dy at the corner; shape = (x Hermite) x (y Hermite).
struct LocalBasis {
    std::array<double, 16> n, dx, dy, dxy, dxx, dyy;
};

LocalBasis tensor_basis(const HermiteBasis& bx, const HermiteBasis& by) {
    LocalBasis out;
    int idx = 0;
    for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx)
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a) {
                    const int ia = 2 * cx + a;
                    const int ib = 2 * cy + b;
                    out.n[idx] = bx.n[ia] * by.n[ib];
                    out.dx[idx] = bx.d1[ia] * by.n[ib];
                    out.dy[idx] = bx.n[ia] * by.d1[ib];
                    out.dxy[idx] = bx.d1[ia] * by.d1[ib];
                    out.dxx[idx] = bx.d2[ia] * by.n[ib];
                    out.dyy[idx] = bx.n[ia] * by.d2[ib];
                    ++idx;
                }
    return out;
}

// global dofs matching the tensor_basis ordering
std::array<int, 16> element_dofs(const Mesh2D& mesh, int ex, int ey) {
    std::array<int, 16> dofs;
    int idx = 0;
    for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx)
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a)
                    dofs[idx++] = 4 * mesh.node_id(ex + cx, ey + cy) + a + 2 * b;
    return dofs;
}

} // namespace

BfsField::BfsField(Mesh2D mesh, Eigen::VectorXd coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
    if (mesh_.nx() < 1 || mesh_.ny() < 1)
        throw Error(ErrorCode::BadCount, "field needs at least one element");
    if (coeffs_.size() != mesh_.dof_count())
        throw std::invalid_argument("BfsField: expected 4 coefficients per node");
}

BfsField::Sample BfsField::eval(double x1, double y) const {
    const double lx = mesh_.x_nodes.front(), hx_end = mesh_.x_nodes.back();
    const double slack_x = 1e-12 * std::max(1.0, hx_end - lx);
    if (!(x1 >= lx - slack_x && x1 <= hx_end + slack_x))
        throw Error(ErrorCode::OutOfDomain,
                    "x1 = " + std::to_string(x1) + " outside the mesh");
    if (!(y >= -1.0 - 1e-12 && y <= 1.0 + 1e-12))
        throw Error(ErrorCode::OutOfDomain,
                    "y = " + std::to_string(y) + " outside [-1, 1]");
    const double x = std::clamp(x1, lx, hx_end);
    const double yc = std::clamp(y, -1.0, 1.0);

    const int ex = locate(mesh_.x_nodes, x);
    const int ey = locate(mesh_.y_nodes, yc);
    const double xa = mesh_.x_nodes[ex], hx = mesh_.x_nodes[ex + 1] - xa;
    const double ya = mesh_.y_nodes[ey], hy = mesh_.y_nodes[ey + 1] - ya;
    const LocalBasis basis =
        tensor_basis(hermite_basis((x - xa) / hx, hx), hermite_basis((yc - ya) / hy, hy));
    const std::array<int, 16> dofs = element_dofs(mesh_, ex, ey);

    Sample s;
    for (int i = 0; i < 16; ++i) {
        const double c = coeffs_(dofs[i]);
        s.value += c * basis.n[i];
        s.dx += c * basis.dx[i];
        s.dy += c * basis.dy[i];
        s.dxy += c * basis.dxy[i];
        s.dxx += c * basis.dxx[i];
        s.dyy += c * basis.dyy[i];
    }
    return s;
}

// ===== pullback =====

PullbackTable pullback_second_derivatives(const ProblemParams& params,
                                          const Profile& profile, double x1, double y) {
    const ProfileSample s = profile.eval(x1);
    const double eps = params.epsilon;
    const double r = s.value, r1 = s.d1, r2 = s.d2;
    const double g = r1 / r;

    using T = PullbackTable;
    PullbackTable tab;
    tab.coeff.setZero();
    // d/dx1 = d/dx - y (rho'/rho) d/dy
    tab.coeff(T::D1, T::RX) = 1.0;
    tab.coeff(T::D1, T::RY) = -y * g;
    // d/dx2 = (1 / (eps rho)) d/dy
    tab.coeff(T::D2, T::RY) = 1.0 / (eps * r);
    // d2/dx1^2: chain rule applied twice to the first row
    tab.coeff(T::D11, T::RXX) = 1.0;
    tab.coeff(T::D11, T::RXY) = -2.0 * y * g;
    tab.coeff(T::D11, T::RYY) = y * y * g * g;
    tab.coeff(T::D11, T::RY) = y * (2.0 * g * g - r2 / r);
    // d2/dx1 dx2
    tab.coeff(T::D12, T::RXY) = 1.0 / (eps * r);
    tab.coeff(T::D12, T::RYY) = -y * r1 / (eps * r * r);
    tab.coeff(T::D12, T::RY) = -r1 / (eps * r * r);
    // d2/dx2^2
    tab.coeff(T::D22, T::RYY) = 1.0 / (eps * eps * r * r);
    tab.jacobian = eps * r;
    return tab;
}

// ===== assembly =====

PlatePencil assemble_plate_forms(const ProblemParams& params, const Profile& profile,
                                 const Mesh2D& mesh, int quad_points) {
    validate_params(params);
    if (params.n != 2)
        throw Error(ErrorCode::BadDimension,
                    "the plate solver covers n = 2, got n = " + std::to_string(params.n));
    const int nx = mesh.nx(), ny = mesh.ny();
    if (nx < 1 || ny < 1)
        throw Error(ErrorCode::BadCount, "mesh needs at least one element");

    const int ndof = mesh.dof_count();
    const double sigma = params.sigma;
    const double eps = params.epsilon;
    const QuadratureRule rule = gauss_legendre(quad_points);

    Eigen::MatrixXd a_mat = Eigen::MatrixXd::Zero(ndof, ndof);
    Eigen::MatrixXd g_mat = Eigen::MatrixXd::Zero(2 * nx * quad_points, ndof);
    int g_row = 0;

    using T = PullbackTable;
    for (int ey = 0; ey < ny; ++ey) {
        for (int ex = 0; ex < nx; ++ex) {
            const double xa = mesh.x_nodes[ex], hx = mesh.x_nodes[ex + 1] - xa;
            const double ya = mesh.y_nodes[ey], hy = mesh.y_nodes[ey + 1] - ya;
            const std::array<int, 16> dofs = element_dofs(mesh, ex, ey);
            Eigen::Matrix<double, 16, 16> ae = Eigen::Matrix<double, 16, 16>::Zero();

            // volume term: (1-sigma) D^2u : D^2v + sigma (Lap u)(Lap v)
            for (int qy = 0; qy < quad_points; ++qy) {
                const double eta = rule.points[qy];
                const double y = ya + hy * eta;
                for (int qx = 0; qx < quad_points; ++qx) {
                    const double xi = rule.points[qx];
                    const double x = xa + hx * xi;
                    const PullbackTable tab =
                        pullback_second_derivatives(params, profile, x, y);
                    const double w =
                        rule.weights[qx] * rule.weights[qy] * hx * hy * tab.jacobian;
                    const LocalBasis basis =
                        tensor_basis(hermite_basis(xi, hx), hermite_basis(eta, hy));

                    std::array<double, 16> d11, d12, d22;
                    for (int i = 0; i < 16; ++i) {
                        d11[i] = tab.coeff(T::D11, T::RXX) * basis.dxx[i] +
                                 tab.coeff(T::D11, T::RXY) * basis.dxy[i] +
                                 tab.coeff(T::D11, T::RYY) * basis.dyy[i] +
                                 tab.coeff(T::D11, T::RY) * basis.dy[i];
                        d12[i] = tab.coeff(T::D12, T::RXY) * basis.dxy[i] +
                                 tab.coeff(T::D12, T::RYY) * basis.dyy[i] +
                                 tab.coeff(T::D12, T::RY) * basis.dy[i];
                        d22[i] = tab.coeff(T::D22, T::RYY) * basis.dyy[i];
                    }
                    for (int i = 0; i < 16; ++i)
                        for (int j = 0; j < 16; ++j) {
                            const double hess = d11[i] * d11[j] + 2.0 * d12[i] * d12[j] +
                                                d22[i] * d22[j];
                            const double lap =
                                (d11[i] + d22[i]) * (d11[j] + d22[j]);
                            ae(i, j) += w * ((1.0 - sigma) * hess + sigma * lap);
                        }
                }
            }

            // boundary faces: spring term into A, trace rows into G
            for (int side = 0; side < 2; ++side) {
                const bool top = side == 1;
                if (top && ey != ny - 1) continue;
                if (!top && ey != 0) continue;
                const double ys = top ? 1.0 : -1.0;
                const double eta = top ? 1.0 : 0.0;
                for (int qx = 0; qx < quad_points; ++qx) {
                    const double xi = rule.points[qx];
                    const double x = xa + hx * xi;
                    const ProfileSample rho = profile.eval(x);
                    const double arc = std::sqrt(1.0 + eps * eps * rho.d1 * rho.d1);
                    // outward normal of the physical face
                    const double nu1 = -eps * rho.d1 / arc;
                    const double nu2 = ys / arc;
                    const double w = rule.weights[qx] * hx * arc;
                    const PullbackTable tab =
                        pullback_second_derivatives(params, profile, x, ys);
                    const LocalBasis basis =
                        tensor_basis(hermite_basis(xi, hx), hermite_basis(eta, hy));

                    std::array<double, 16> un;
                    for (int i = 0; i < 16; ++i) {
                        const double d1 = tab.coeff(T::D1, T::RX) * basis.dx[i] +
                                          tab.coeff(T::D1, T::RY) * basis.dy[i];
                        const double d2 = tab.coeff(T::D2, T::RY) * basis.dy[i];
                        un[i] = nu1 * d1 + nu2 * d2;
                    }
                    for (int i = 0; i < 16; ++i)
                        for (int j = 0; j < 16; ++j)
                            ae(i, j) += w * params.mu * un[i] * un[j];

                    const double troot = std::sqrt(w);
                    for (int i = 0; i < 16; ++i)
                        g_mat(g_row, dofs[i]) = troot * basis.n[i];
                    ++g_row;
                }
            }

            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 16; ++j) a_mat(dofs[i], dofs[j]) += ae(i, j);
        }
    }

    // clamp all four slots on the lateral ends x1 = +-l
    std::vector<std::uint8_t> active(ndof, 1);
    for (int j = 0; j <= ny; ++j)
        for (int t = 0; t < 4; ++t) {
            active[4 * mesh.node_id(0, j) + t] = 0;
            active[4 * mesh.node_id(nx, j) + t] = 0;
        }

    Eigen::MatrixXd b_mat = g_mat.transpose() * g_mat;
    return PlatePencil{SymmetricMatrix(std::move(a_mat), active),
                       SymmetricMatrix(std::move(b_mat), active),
                       std::move(g_mat),
                       mesh,
                       params,
                       profile,
                       quad_points};
}

// ===== solves =====

EigenSolution solve_steklov_2d(const PlatePencil& pencil, int k_max) {
    EigenSolution sol = finite_pencil_eigs(pencil.a, pencil.b, pencil.b_factor, k_max);
    for (int k = 0; k < sol.values.size(); ++k)
        if (!(sol.values(k) > 0.0))
            throw Error(ErrorCode::SingularSystem,
                        "computed eigenvalue " + std::to_string(sol.values(k)) +
                            " is not positive");
    return sol;
}

BfsField steklov_eigenfunction(const PlatePencil& pencil, const EigenSolution& sol,
                               int k) {
    if (k < 0 || k >= sol.vectors.cols())
        throw Error(ErrorCode::BadCount, "eigenvector index out of range");
    return BfsField(pencil.mesh, sol.vectors.col(k));
}

BfsField solve_penalized_source(const PlatePencil& pencil, const Eigen::VectorXd& f,
                                double tau) {
    if (!(tau > 0.0))
        throw Error(ErrorCode::NonPositive,
                    "penalty tau must be positive, got " + std::to_string(tau));
    if (f.size() != pencil.a.dim())
        throw std::invalid_argument("solve_penalized_source: coefficient length mismatch");
    SymmetricMatrix shifted(pencil.a.full() + tau * pencil.b.full(), pencil.a.mask());
    return BfsField(pencil.mesh, solve_spd(shifted, pencil.b.full() * f));
}

double trace_on_gamma(const BfsField& field, Side side, double x1) {
    return field.eval(x1, side == Side::Top ? 1.0 : -1.0).value;
}

double normal_derivative_on_gamma(const ProblemParams& params, const Profile& profile,
                                  const BfsField& field, Side side, double x1) {
    const double ys = side == Side::Top ? 1.0 : -1.0;
    const BfsField::Sample s = field.eval(x1, ys);
    const PullbackTable tab = pullback_second_derivatives(params, profile, x1, ys);
    using T = PullbackTable;
    const double d1 = tab.coeff(T::D1, T::RX) * s.dx + tab.coeff(T::D1, T::RY) * s.dy;
    const double d2 = tab.coeff(T::D2, T::RY) * s.dy;
    const ProfileSample rho = profile.eval(x1);
    const double arc = std::sqrt(1.0 + params.epsilon * params.epsilon * rho.d1 * rho.d1);
    return (-params.epsilon * rho.d1 / arc) * d1 + (ys / arc) * d2;
}

double rayleigh_plate(const PlatePencil& pencil, const BfsField& field) {
    if (field.coeffs().size() != pencil.a.dim())
        throw std::invalid_argument("rayleigh_plate: field does not match the pencil mesh");
    Eigen::VectorXd c = field.coeffs();
    const auto& mask = pencil.a.mask();
    for (int i = 0; i < c.size(); ++i)
        if (!mask[i]) c(i) = 0.0;
    const double den = (pencil.b_factor * c).squaredNorm();
    if (!(den > 1e-300))
        throw Error(ErrorCode::ZeroTrace, "field has zero boundary trace after clamping");
    const double num = c.dot(pencil.a.full() * c);
    return num / den;
}

} // namespace steklab
