#include "steklab/sturm1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "steklab/constants.hpp"
#include "steklab/errors.hpp"
#include "steklab/hermite.hpp"
#include "steklab/quadrature.hpp"

namespace steklab {

Mesh1D build_mesh_1d(double l, int n_elements) {
    if (!(l > 0.0))
        throw Error(ErrorCode::NonPositive, "l must be positive, got " + std::to_string(l));
    if (n_elements < 2)
        throw Error(ErrorCode::BadCount,
                    "need at least 2 elements, got " + std::to_string(n_elements));
    Mesh1D mesh;
    mesh.nodes.resize(n_elements + 1);
    for (int i = 0; i <= n_elements; ++i)
        mesh.nodes[i] = l * (2.0 * i / n_elements - 1.0);
    mesh.nodes.front() = -l;
    mesh.nodes.back() = l;
    return mesh;
}

// ===== HermiteField =====

HermiteField::HermiteField(Mesh1D mesh, Eigen::VectorXd coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
    if (mesh_.elements() < 1)
        throw Error(ErrorCode::BadCount, "field needs at least one element");
    if (coeffs_.size() != 2 * static_cast<int>(mesh_.nodes.size()))
        throw std::invalid_argument("HermiteField: expected 2 coefficients per node");
}

HermiteField::Sample HermiteField::eval(double x1) const {
    const double lo = mesh_.nodes.front();
    const double hi = mesh_.nodes.back();
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    if (!(x1 >= lo - slack && x1 <= hi + slack))
        throw Error(ErrorCode::OutOfDomain,
                    "x1 = " + std::to_string(x1) + " outside the mesh");
    const double x = std::clamp(x1, lo, hi);

    auto it = std::upper_bound(mesh_.nodes.begin(), mesh_.nodes.end(), x);
    int e = static_cast<int>(it - mesh_.nodes.begin()) - 1;
    e = std::clamp(e, 0, mesh_.elements() - 1);

    const double xa = mesh_.nodes[e];
    const double h = mesh_.nodes[e + 1] - xa;
    const HermiteBasis basis = hermite_basis((x - xa) / h, h);

    Sample s;
    for (int i = 0; i < 4; ++i) {
        const double c = coeffs_(2 * e + i);
        s.value += c * basis.n[i];
        s.d1 += c * basis.d1[i];
        s.d2 += c * basis.d2[i];
    }
    return s;
}

// ===== assembly =====

LimitPencil assemble_limit_pencil(const ProblemParams& params, const Profile& profile,
                                  const Mesh1D& mesh, int quad_points) {
    validate_params(params);
    const int n_el = mesh.elements();
    if (n_el < 1)
        throw Error(ErrorCode::BadCount, "mesh needs at least one element");

    const int ndof = 2 * (n_el + 1);
    const double bending = distortion_factor(params.n, params.sigma);
    const QuadratureRule rule = gauss_legendre(quad_points);

    Eigen::MatrixXd k_mat = Eigen::MatrixXd::Zero(ndof, ndof);
    Eigen::MatrixXd m_mat = Eigen::MatrixXd::Zero(ndof, ndof);
    Eigen::MatrixXd f_mat = Eigen::MatrixXd::Zero(n_el * quad_points, ndof);

    for (int e = 0; e < n_el; ++e) {
        const double xa = mesh.nodes[e];
        const double h = mesh.nodes[e + 1] - xa;
        Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
        Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
        for (int q = 0; q < quad_points; ++q) {
            const double xi = rule.points[q];
            const double w = rule.weights[q] * h;
            const ProfileSample rho = profile.eval(xa + h * xi);
            const HermiteBasis basis = hermite_basis(xi, h);
            const double wk = w * std::pow(rho.value, params.n - 1);
            const double wm = w * (params.n - 1) * std::pow(rho.value, params.n - 2);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    ke(i, j) += wk * basis.d2[i] * basis.d2[j];
                    me(i, j) += wm * basis.n[i] * basis.n[j];
                }
            const double froot = std::sqrt(wm);
            for (int i = 0; i < 4; ++i)
                f_mat(e * quad_points + q, 2 * e + i) = froot * basis.n[i];
        }
        // scale once so K(sigma) is exactly the common factor times K(0)
        ke *= bending;
        k_mat.block<4, 4>(2 * e, 2 * e) += ke;
        m_mat.block<4, 4>(2 * e, 2 * e) += me;
    }

    std::vector<std::uint8_t> active(ndof, 1);
    active[0] = active[1] = 0;
    active[ndof - 2] = active[ndof - 1] = 0;

    return LimitPencil{SymmetricMatrix(std::move(k_mat), active),
                       SymmetricMatrix(std::move(m_mat), active),
                       std::move(f_mat),
                       mesh,
                       params,
                       profile,
                       quad_points};
}

// ===== eigenvalue and source solves =====

EigenSolution solve_limit_eigs(const LimitPencil& pencil, int k_max) {
    EigenSolution sol =
        finite_pencil_eigs(pencil.stiffness, pencil.mass, pencil.mass_factor, k_max);
    // sign convention: first interior value coefficient of visible size > 0
    const int ndof = static_cast<int>(sol.vectors.rows());
    for (int k = 0; k < sol.vectors.cols(); ++k) {
        auto col = sol.vectors.col(k);
        const double vmax = col.cwiseAbs().maxCoeff();
        for (int i = 2; i <= ndof - 4; i += 2) {
            if (std::abs(col(i)) > 1e-12 * vmax) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
    }
    return sol;
}

HermiteField limit_eigenfunction(const LimitPencil& pencil, const EigenSolution& sol,
                                 int k) {
    if (k < 0 || k >= sol.vectors.cols())
        throw Error(ErrorCode::BadCount, "eigenvector index out of range");
    const double scale = std::sqrt(unit_ball_volume(pencil.params.n - 1));
    return HermiteField(pencil.mesh, sol.vectors.col(k) / scale);
}

namespace {

HermiteField solve_limit_resolvent(const LimitPencil& pencil, const Eigen::VectorXd& rhs) {
    SymmetricMatrix km(pencil.stiffness.full() + pencil.mass.full(),
                       pencil.stiffness.mask());
    return HermiteField(pencil.mesh, solve_spd(km, rhs));
}

} // namespace

HermiteField solve_limit_source(const LimitPencil& pencil, const Eigen::VectorXd& g) {
    if (g.size() != pencil.mass.dim())
        throw std::invalid_argument("solve_limit_source: coefficient length mismatch");
    return solve_limit_resolvent(pencil, pencil.mass.full() * g);
}

HermiteField solve_limit_source(const LimitPencil& pencil,
                                const std::function<double(double)>& g) {
    // load vector with the same weighted quadrature the mass matrix uses
    const int n_el = pencil.mesh.elements();
    const QuadratureRule rule = gauss_legendre(pencil.quad_points);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pencil.mass.dim());
    for (int e = 0; e < n_el; ++e) {
        const double xa = pencil.mesh.nodes[e];
        const double h = pencil.mesh.nodes[e + 1] - xa;
        for (int q = 0; q < pencil.quad_points; ++q) {
            const double xi = rule.points[q];
            const double x = xa + h * xi;
            const ProfileSample rho = pencil.profile.eval(x);
            const double wm = rule.weights[q] * h * (pencil.params.n - 1) *
                              std::pow(rho.value, pencil.params.n - 2);
            const HermiteBasis basis = hermite_basis(xi, h);
            const double gv = g(x);
            for (int i = 0; i < 4; ++i) rhs(2 * e + i) += wm * gv * basis.n[i];
        }
    }
    return solve_limit_resolvent(pencil, rhs);
}

std::function<double(double)> mean_operator(std::function<double(double)> top,
                                            std::function<double(double)> bottom) {
    return [top = std::move(top), bottom = std::move(bottom)](double x1) {
        return 0.5 * (top(x1) + bottom(x1));
    };
}

double rayleigh_1d(const LimitPencil& pencil, const HermiteField& field) {
    if (field.coeffs().size() != pencil.stiffness.dim())
        throw std::invalid_argument("rayleigh_1d: field does not match the pencil mesh");
    Eigen::VectorXd c = field.coeffs();
    const auto& mask = pencil.stiffness.mask();
    for (int i = 0; i < c.size(); ++i)
        if (!mask[i]) c(i) = 0.0;
    // denominator through the factor rows: exactly nonnegative
    const double den = (pencil.mass_factor * c).squaredNorm();
    if (!(den > 1e-300))
        throw Error(ErrorCode::ZeroTrace, "field has no weighted mass after clamping");
    const double num = c.dot(pencil.stiffness.full() * c);
    return num / den;
}

} // namespace steklab
