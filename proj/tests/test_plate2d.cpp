#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "steklab/constants.hpp"
#include "steklab/errors.hpp"
#include "steklab/plate2d.hpp"
#include "steklab/sturm1d.hpp"

using namespace steklab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a steklab::Error");
    return ErrorCode::BadConfig;
}

// Interpolate nodal data (u, u_x, u_y, u_xy) onto the BFS coefficient vector.
template <typename F>
Eigen::VectorXd interpolate_nodal(const Mesh2D& mesh, F nodal) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(mesh.dof_count());
    for (int j = 0; j <= mesh.ny(); ++j)
        for (int i = 0; i <= mesh.nx(); ++i) {
            const std::array<double, 4> v = nodal(mesh.x_nodes[i], mesh.y_nodes[j]);
            for (int s = 0; s < 4; ++s) c(4 * mesh.node_id(i, j) + s) = v[s];
        }
    return c;
}

// ===== finite-difference composition oracle for the pullback table =====
//
// For u(x1, x2) = x1^2 x2 + x2^3 and the map x2 = eps rho(x1) y, the pulled
// back function is uhat(x1, y) = u(x1, eps rho(x1) y). The table applied to
// centered finite differences of uhat must reproduce the analytic physical
// derivatives of u. The profile is re-evaluated here in long double from its
// defining formula so the oracle's difference quotients do not inherit the
// library's double roundoff.

using RhoLd = std::function<long double(long double)>;

long double test_u(long double x1, long double x2) {
    return x1 * x1 * x2 + x2 * x2 * x2;
}

struct RefDerivs {
    long double x, y, xx, xy, yy;
};

RefDerivs fd_reference(const RhoLd& rho, long double eps, long double x1,
                       long double y) {
    const auto uh = [&](long double a, long double b) {
        return test_u(a, eps * rho(a) * b);
    };
    const long double h = 1e-5L;
    RefDerivs d;
    d.x = (uh(x1 + h, y) - uh(x1 - h, y)) / (2 * h);
    d.y = (uh(x1, y + h) - uh(x1, y - h)) / (2 * h);
    d.xx = (uh(x1 + h, y) - 2 * uh(x1, y) + uh(x1 - h, y)) / (h * h);
    d.yy = (uh(x1, y + h) - 2 * uh(x1, y) + uh(x1, y - h)) / (h * h);
    d.xy = (uh(x1 + h, y + h) - uh(x1 + h, y - h) - uh(x1 - h, y + h) +
            uh(x1 - h, y - h)) /
           (4 * h * h);
    return d;
}

void check_table_point(const ProblemParams& p, const Profile& prof, const RhoLd& rho,
                       double x1, double y, double tol) {
    const PullbackTable t = pullback_second_derivatives(p, prof, x1, y);
    const RefDerivs d = fd_reference(rho, static_cast<long double>(p.epsilon), x1, y);
    const double ref[5] = {static_cast<double>(d.x), static_cast<double>(d.y),
                           static_cast<double>(d.xx), static_cast<double>(d.xy),
                           static_cast<double>(d.yy)};

    const double x2 =
        static_cast<double>(static_cast<long double>(p.epsilon) * rho(x1) * y);
    const double want[5] = {2.0 * x1 * x2, x1 * x1 + 3.0 * x2 * x2, 2.0 * x2,
                            2.0 * x1, 6.0 * x2};
    for (int r = 0; r < 5; ++r) {
        double got = 0.0;
        for (int c = 0; c < 5; ++c) got += t.coeff(r, c) * ref[c];
        CHECK(oracles::rel_err(got, want[r]) < tol);
    }
    CHECK(oracles::rel_err(t.jacobian,
                           static_cast<double>(static_cast<long double>(p.epsilon) *
                                               rho(x1))) < 1e-13);
}

struct ShippedProfile {
    Profile profile;
    RhoLd rho;
};

std::vector<ShippedProfile> shipped_profiles(double l) {
    const long double pi = std::numbers::pi_v<long double>;
    const long double ll = static_cast<long double>(l);
    std::vector<ShippedProfile> out;
    out.push_back({Profile::constant(1.0, l), [](long double) { return 1.0L; }});
    out.push_back({Profile::polynomial({1.0, 0.2, 0.1}, l), [](long double x) {
                       return 1.0L + 0.2L * x + 0.1L * x * x;
                   }});
    out.push_back({Profile::cosine_bump(1.0, 0.3, l), [pi, ll](long double x) {
                       return 1.0L + 0.3L * cosl(pi * x / ll);
                   }});
    return out;
}

ProblemParams plate_params(double eps, double sigma = 0.3) {
    ProblemParams p;
    p.n = 2;
    p.sigma = sigma;
    p.mu = 1.0;
    p.l = 1.0;
    p.epsilon = eps;
    return p;
}

} // namespace

TEST_CASE("tensor meshes carry the stated nodes and counts") {
    const Mesh2D small = build_mesh_2d(1.0, 2, 1);
    CHECK(small.x_nodes.size() == 3);
    CHECK(small.y_nodes.size() == 2);
    CHECK(small.nx() * small.ny() == 2);

    const Mesh2D mid = build_mesh_2d(1.0, 4, 2);
    CHECK(mid.x_nodes.size() == 5);
    CHECK(mid.y_nodes.size() == 3);
    CHECK(mid.nx() * mid.ny() == 8);
    CHECK(mid.dof_count() == 4 * 15);

    const Mesh2D wide = build_mesh_2d(2.0, 2, 2);
    CHECK(wide.x_nodes == std::vector<double>{-2.0, 0.0, 2.0});
    CHECK(wide.y_nodes == std::vector<double>{-1.0, 0.0, 1.0});

    CHECK(code_of([] { build_mesh_2d(1.0, 1, 1); }) == ErrorCode::BadCount);
    CHECK(code_of([] { build_mesh_2d(1.0, 4, 0); }) == ErrorCode::BadCount);
    CHECK(code_of([] { build_mesh_2d(0.0, 4, 2); }) == ErrorCode::NonPositive);
}

TEST_CASE("pullback table reduces to the affine map for constant profile") {
    const ProblemParams p = plate_params(0.1);
    const Profile prof = Profile::constant(1.0, 1.0);
    const PullbackTable t = pullback_second_derivatives(p, prof, 0.3, -0.4);

    using PT = PullbackTable;
    // d/dx2 row: uhat_y / eps
    CHECK(t.coeff(PT::D2, PT::RY) == doctest::Approx(1.0 / p.epsilon).epsilon(1e-14));
    // d2/dx2^2 row: (0, 0, 0, 0, eps^-2)
    CHECK(t.coeff(PT::D22, PT::RYY) ==
          doctest::Approx(1.0 / (p.epsilon * p.epsilon)).epsilon(1e-14));
    // mixed row: (0, 0, 0, eps^-1, 0)
    CHECK(t.coeff(PT::D12, PT::RXY) ==
          doctest::Approx(1.0 / p.epsilon).epsilon(1e-14));
    CHECK(t.jacobian == doctest::Approx(p.epsilon).epsilon(1e-14));

    // all off-pattern entries vanish identically when rho' = rho'' = 0
    const double pattern[5][5] = {{1, 0, 0, 0, 0},
                                  {0, 1, 0, 0, 0},
                                  {0, 0, 1, 0, 0},
                                  {0, 0, 0, 1, 0},
                                  {0, 0, 0, 0, 1}};
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            if (pattern[r][c] == 0.0) CHECK(t.coeff(r, c) == 0.0);
}

TEST_CASE("pullback table matches the finite-difference composition oracle") {
    // stated point for the wedge profile rho = 1 + x1
    ProblemParams p = plate_params(0.1);
    const Profile wedge = Profile::polynomial({1.0, 1.0}, 1.0);
    check_table_point(p, wedge, [](long double x) { return 1.0L + x; }, 0.5, 0.5,
                      1e-6);

    // y = 0 kills the y-dependent correction in the first-derivative row
    const Profile bump = Profile::cosine_bump(1.0, 0.3, 1.0);
    const PullbackTable t0 = pullback_second_derivatives(p, bump, 0.3, 0.0);
    using PT = PullbackTable;
    CHECK(t0.coeff(PT::D1, PT::RX) == 1.0);
    CHECK(t0.coeff(PT::D1, PT::RY) == 0.0);

    // validation contract: 100 random points for each shipped profile
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ux(-0.9, 0.9);
    std::uniform_real_distribution<double> uy(-0.95, 0.95);
    for (const ShippedProfile& sp : shipped_profiles(1.0))
        for (int i = 0; i < 100; ++i)
            check_table_point(p, sp.profile, sp.rho, ux(rng), uy(rng), 1e-6);

    // profile positivity is checked at the evaluation point
    const Profile dips = Profile::polynomial({0.5, -1.0}, 1.0);
    CHECK(code_of([&] { pullback_second_derivatives(p, dips, 0.9, 0.0); }) ==
          ErrorCode::NonPositiveProfile);
}

TEST_CASE("assembled plate forms are symmetric and carry the clamp mask") {
    const ProblemParams p = plate_params(0.1);
    const Mesh2D mesh = build_mesh_2d(1.0, 8, 2);
    for (const ShippedProfile& sp : shipped_profiles(1.0)) {
        const PlatePencil pencil = assemble_plate_forms(p, sp.profile, mesh);
        // the SymmetricMatrix constructor enforces skew < 1e-12 relative and
        // then symmetrizes exactly; both survive here
        CHECK(pencil.a.full() == pencil.a.full().transpose().eval());
        CHECK(pencil.b.full() == pencil.b.full().transpose().eval());
        CHECK(pencil.a.dim() == mesh.dof_count());

        // every dof of every node on x1 = +-l is masked out
        for (int j = 0; j <= mesh.ny(); ++j)
            for (int s = 0; s < 4; ++s) {
                CHECK(pencil.a.mask()[4 * mesh.node_id(0, j) + s] == 0);
                CHECK(pencil.a.mask()[4 * mesh.node_id(mesh.nx(), j) + s] == 0);
            }
        CHECK(pencil.a.active_dim() == mesh.dof_count() - 8 * (mesh.ny() + 1));
    }

    ProblemParams bad = p;
    bad.n = 3;
    CHECK(code_of([&] {
        assemble_plate_forms(bad, Profile::constant(1.0, 1.0), mesh);
    }) == ErrorCode::BadDimension);
}

TEST_CASE("mapped assembly equals direct physical assembly in the affine case") {
    struct Case {
        int nx, ny;
        double c, eps;
    };
    for (const Case& tc : {Case{8, 2, 1.0, 0.1}, Case{16, 2, 1.0, 0.1},
                           Case{32, 4, 1.0, 0.1}, Case{16, 2, 0.75, 0.2}}) {
        const ProblemParams p = plate_params(tc.eps);
        const Profile prof = Profile::constant(tc.c, 1.0);
        const Mesh2D mesh = build_mesh_2d(1.0, tc.nx, tc.ny);
        const PlatePencil pencil = assemble_plate_forms(p, prof, mesh);

        const oracles::PhysicalPlateMatrices phys = oracles::assemble_physical_rectangle(
            1.0, tc.eps * tc.c, p.sigma, p.mu, tc.nx, tc.ny);

        // physical slope dofs are taken with respect to z = eps*c*y, so the
        // reference-coordinate comparison rescales them by s = eps*c per node
        const double s = tc.eps * tc.c;
        Eigen::VectorXd d(mesh.dof_count());
        for (int node = 0; node < mesh.node_count(); ++node) {
            d(4 * node + 0) = 1.0;
            d(4 * node + 1) = 1.0;
            d(4 * node + 2) = s;
            d(4 * node + 3) = s;
        }
        const Eigen::MatrixXd a_cmp =
            d.cwiseInverse().asDiagonal() * phys.a * d.cwiseInverse().asDiagonal();
        const Eigen::MatrixXd b_cmp =
            d.cwiseInverse().asDiagonal() * phys.b * d.cwiseInverse().asDiagonal();

        const double a_scale = pencil.a.full().cwiseAbs().maxCoeff();
        const double b_scale = pencil.b.full().cwiseAbs().maxCoeff();
        CHECK((pencil.a.full() - a_cmp).cwiseAbs().maxCoeff() < 1e-12 * a_scale);
        CHECK((pencil.b.full() - b_cmp).cwiseAbs().maxCoeff() < 1e-12 * b_scale);
    }
}

TEST_CASE("boundary mass has trace rank and integrates the boundary measure") {
    const ProblemParams p = plate_params(0.1);

    // rank of B on the clamped subspace: traces live on y = +-1 and are
    // spanned by the (u, u_x) slots of unclamped boundary-row nodes
    for (const auto& [nx, ny] : std::vector<std::pair<int, int>>{{8, 2}, {6, 1}}) {
        const Mesh2D mesh = build_mesh_2d(1.0, nx, ny);
        const PlatePencil pencil =
            assemble_plate_forms(p, Profile::cosine_bump(1.0, 0.3, 1.0), mesh);
        const auto [vals, vecs] = symmetric_eigs(pencil.b.active_submatrix());
        const double top = vals.cwiseAbs().maxCoeff();
        int rank = 0;
        for (int i = 0; i < vals.size(); ++i)
            if (vals(i) > 1e-10 * top) ++rank;
        CHECK(rank == 4 * (nx - 1));
        CHECK(vals.minCoeff() > -1e-12 * top); // semidefinite
    }

    // u == 1: c^T B c = |Gamma_eps| = 2 int sqrt(1 + eps^2 rho'^2) dx1
    const Mesh2D mesh = build_mesh_2d(1.0, 16, 2);
    const auto ones = [](double, double) {
        return std::array<double, 4>{1.0, 0.0, 0.0, 0.0};
    };
    {
        const PlatePencil pencil =
            assemble_plate_forms(p, Profile::constant(1.0, 1.0), mesh);
        const Eigen::VectorXd c = interpolate_nodal(mesh, ones);
        CHECK(oracles::rel_err(c.dot(pencil.b.full() * c), 4.0) < 1e-13);
    }
    {
        const Profile bump = Profile::cosine_bump(1.0, 0.3, 1.0);
        const PlatePencil pencil = assemble_plate_forms(p, bump, mesh);
        const Eigen::VectorXd c = interpolate_nodal(mesh, ones);

        // composite Simpson oracle for the arc length, in long double
        const long double pi = std::numbers::pi_v<long double>;
        const auto arc = [&](long double x) {
            const long double rp = -0.3L * pi * sinl(pi * x);
            const long double e = 0.1L;
            return sqrtl(1.0L + e * e * rp * rp);
        };
        const int m = 20000;
        const long double h = 2.0L / m;
        long double sum = arc(-1.0L) + arc(1.0L);
        for (int i = 1; i < m; ++i)
            sum += arc(-1.0L + i * h) * ((i % 2) ? 4.0L : 2.0L);
        const double gamma_len = static_cast<double>(2.0L * sum * h / 3.0L);
        CHECK(oracles::rel_err(c.dot(pencil.b.full() * c), gamma_len) < 1e-9);
    }
}

TEST_CASE("Steklov eigenvalues are positive and track the thin limit") {
    const ProblemParams p = plate_params(0.05);
    const Profile prof = Profile::constant(1.0, 1.0);
    const PlatePencil pencil = assemble_plate_forms(p, prof, build_mesh_2d(1.0, 64, 4));
    const EigenSolution sol = solve_steklov_2d(pencil, 4);

    for (int k = 0; k < 4; ++k) {
        CHECK(sol.values(k) > 0.0);
        if (k > 0) CHECK(sol.values(k) >= sol.values(k - 1));
        CHECK(sol.residuals(k) < 1e-10);
        // Rayleigh identity on the returned pair
        const BfsField f(pencil.mesh, sol.vectors.col(k));
        CHECK(oracles::rel_err(rayleigh_plate(pencil, f), sol.values(k)) < 1e-9);
    }

    // B-orthonormal eigenvectors
    const Eigen::MatrixXd gram =
        sol.vectors.transpose() * pencil.b.full() * sol.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);

    // first eigenvalue sits near eps times the limit eigenvalue
    ProblemParams limit = p;
    limit.epsilon = 1.0;
    const LimitPencil lp = assemble_limit_pencil(limit, prof, build_mesh_1d(1.0, 128));
    const EigenSolution limit_sol = solve_limit_eigs(lp, 1);
    const double ratio = sol.values(0) / (p.epsilon * limit_sol.values(0));
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.2);

    // k_max beyond the trace rank is refused
    const PlatePencil tiny = assemble_plate_forms(p, prof, build_mesh_2d(1.0, 8, 2));
    CHECK(code_of([&] { solve_steklov_2d(tiny, 4 * (8 - 1) + 1); }) ==
          ErrorCode::TooFewFinite);

    // eigenfunction accessor hands back the stored coefficient column
    const BfsField first = steklov_eigenfunction(pencil, sol, 0);
    CHECK(first.coeffs() == sol.vectors.col(0));
}

TEST_CASE("penalized source solve inverts the shifted form") {
    const ProblemParams p = plate_params(0.1);
    const Profile bump = Profile::cosine_bump(1.0, 0.3, 1.0);
    const PlatePencil pencil = assemble_plate_forms(p, bump, build_mesh_2d(1.0, 16, 2));

    // zero data, zero solution
    const BfsField zero =
        solve_penalized_source(pencil, Eigen::VectorXd::Zero(pencil.a.dim()), 0.5);
    CHECK(zero.coeffs().norm() == 0.0);

    // an eigenpair turns the shifted solve into the identity
    const double tau = p.epsilon;
    const EigenSolution sol = solve_steklov_2d(pencil, 2);
    for (int k = 0; k < 2; ++k) {
        const Eigen::VectorXd f = (sol.values(k) + tau) * sol.vectors.col(k);
        const BfsField u = solve_penalized_source(pencil, f, tau);
        const Eigen::VectorXd err = u.coeffs() - sol.vectors.col(k);
        const double b_err = std::sqrt(err.dot(pencil.b.full() * err));
        CHECK(b_err < 1e-8);
    }

    // eigenvalues of (A + tau B, B) are shifted by exactly tau, same vectors
    const SymmetricMatrix shifted(pencil.a.full() + tau * pencil.b.full(),
                                  pencil.a.mask());
    const EigenSolution shifted_sol =
        finite_pencil_eigs(shifted, pencil.b, pencil.b_factor, 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(oracles::rel_err(shifted_sol.values(k), sol.values(k) + tau) < 1e-10);
        const double align = std::abs(
            shifted_sol.vectors.col(k).dot(pencil.b.full() * sol.vectors.col(k)));
        CHECK(std::abs(align - 1.0) < 1e-8);
    }

    CHECK(code_of([&] {
        solve_penalized_source(pencil, Eigen::VectorXd::Zero(pencil.a.dim()), 0.0);
    }) == ErrorCode::NonPositive);
}

TEST_CASE("boundary traces evaluate the reference field on the faces") {
    const Mesh2D mesh = build_mesh_2d(1.0, 8, 2);

    const BfsField ones(mesh, interpolate_nodal(mesh, [](double, double) {
                            return std::array<double, 4>{1.0, 0.0, 0.0, 0.0};
                        }));
    const BfsField linear(mesh, interpolate_nodal(mesh, [](double x, double) {
                              return std::array<double, 4>{x, 1.0, 0.0, 0.0};
                          }));
    const BfsField zeros(mesh, Eigen::VectorXd::Zero(mesh.dof_count()));

    for (double x : {-1.0, -0.63, 0.0, 0.37, 1.0}) {
        for (Side side : {Side::Top, Side::Bottom}) {
            CHECK(trace_on_gamma(ones, side, x) == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(trace_on_gamma(linear, side, x) == doctest::Approx(x).epsilon(1e-13));
            CHECK(trace_on_gamma(zeros, side, x) == 0.0);
        }
    }
    CHECK_THROWS_AS(trace_on_gamma(ones, Side::Top, 1.0 + 1e-6), Error);
}

TEST_CASE("normal derivative applies the outward normal on both faces") {
    const ProblemParams p = plate_params(0.1);
    // cubic-or-lower profile: eps*rho(x1)*y lies in the BFS space exactly
    const Profile prof = Profile::polynomial({1.0, 0.2, 0.1}, 1.0);
    const Mesh2D mesh = build_mesh_2d(1.0, 8, 2);
    const double eps = p.epsilon;

    const BfsField ones(mesh, interpolate_nodal(mesh, [](double, double) {
                            return std::array<double, 4>{1.0, 0.0, 0.0, 0.0};
                        }));
    // physical u = x2 pulled back: uhat = eps rho(x1) y
    const BfsField vert(mesh, interpolate_nodal(mesh, [&](double x, double y) {
                            const ProfileSample s = prof.eval(x);
                            return std::array<double, 4>{eps * s.value * y,
                                                         eps * s.d1 * y, eps * s.value,
                                                         eps * s.d1};
                        }));
    // physical u = x1
    const BfsField horiz(mesh, interpolate_nodal(mesh, [](double x, double) {
                             return std::array<double, 4>{x, 1.0, 0.0, 0.0};
                         }));

    for (double x : {-0.8, -0.21, 0.0, 0.5, 0.93}) {
        const double rp = prof.eval(x).d1;
        const double arc = std::sqrt(1.0 + eps * eps * rp * rp);
        CHECK(normal_derivative_on_gamma(p, prof, ones, Side::Top, x) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
        CHECK(normal_derivative_on_gamma(p, prof, ones, Side::Bottom, x) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
        // grad u = (0, 1): picks out the x2-component of the outward normal
        CHECK(normal_derivative_on_gamma(p, prof, vert, Side::Top, x) ==
              doctest::Approx(1.0 / arc).epsilon(1e-12));
        CHECK(normal_derivative_on_gamma(p, prof, vert, Side::Bottom, x) ==
              doctest::Approx(-1.0 / arc).epsilon(1e-12));
        // grad u = (1, 0): the x1-component is -eps rho' on both faces
        CHECK(normal_derivative_on_gamma(p, prof, horiz, Side::Top, x) ==
              doctest::Approx(-eps * rp / arc).scale(1.0).epsilon(1e-12));
        CHECK(normal_derivative_on_gamma(p, prof, horiz, Side::Bottom, x) ==
              doctest::Approx(-eps * rp / arc).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("plate Rayleigh quotient reproduces and bounds the spectrum") {
    const ProblemParams p = plate_params(0.1);
    const Profile bump = Profile::cosine_bump(1.0, 0.3, 1.0);
    const Mesh2D mesh = build_mesh_2d(1.0, 8, 2);
    const PlatePencil pencil = assemble_plate_forms(p, bump, mesh);
    const EigenSolution sol = solve_steklov_2d(pencil, 2);

    for (int k = 0; k < 2; ++k) {
        const BfsField f(mesh, sol.vectors.col(k));
        CHECK(oracles::rel_err(rayleigh_plate(pencil, f), sol.values(k)) < 1e-9);
        const BfsField scaled(mesh, 10.0 * sol.vectors.col(k));
        CHECK(oracles::rel_err(rayleigh_plate(pencil, scaled),
                               rayleigh_plate(pencil, f)) < 1e-12);
    }

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd c(mesh.dof_count());
        for (int i = 0; i < c.size(); ++i) c(i) = u(rng);
        CHECK(rayleigh_plate(pencil, BfsField(mesh, c)) >=
              sol.values(0) * (1.0 - 1e-9));
    }

    // zero trace: zero field, middle-row bubble, clamped-slot-only field
    CHECK(code_of([&] {
        rayleigh_plate(pencil, BfsField(mesh, Eigen::VectorXd::Zero(mesh.dof_count())));
    }) == ErrorCode::ZeroTrace);
    Eigen::VectorXd bubble = Eigen::VectorXd::Zero(mesh.dof_count());
    bubble(4 * mesh.node_id(4, 1) + 0) = 1.0; // value slot, interior node row
    CHECK(code_of([&] { rayleigh_plate(pencil, BfsField(mesh, bubble)); }) ==
          ErrorCode::ZeroTrace);
    Eigen::VectorXd clamped = Eigen::VectorXd::Zero(mesh.dof_count());
    clamped(4 * mesh.node_id(0, 0) + 0) = 1.0;
    clamped(4 * mesh.node_id(mesh.nx(), 2) + 1) = 2.0;
    CHECK(code_of([&] { rayleigh_plate(pencil, BfsField(mesh, clamped)); }) ==
          ErrorCode::ZeroTrace);
}

TEST_CASE("clamped plate form stays positive definite across sigma") {
    const Mesh2D mesh = build_mesh_2d(1.0, 16, 2);
    for (const ShippedProfile& sp : shipped_profiles(1.0))
        for (double sigma : {-0.9, -0.5, 0.0, 0.3, 0.7, 0.95}) {
            const PlatePencil pencil =
                assemble_plate_forms(plate_params(0.1, sigma), sp.profile, mesh);
            CHECK_NOTHROW(factor_spd(pencil.a));
        }
}

TEST_CASE("first eigenvalue is mesh-converged and quadrature-robust") {
    const ProblemParams p = plate_params(0.1);
    const Profile prof = Profile::constant(1.0, 1.0);
    const double coarse =
        solve_steklov_2d(assemble_plate_forms(p, prof, build_mesh_2d(1.0, 32, 4)), 1)
            .values(0);
    const double fine =
        solve_steklov_2d(assemble_plate_forms(p, prof, build_mesh_2d(1.0, 64, 8)), 1)
            .values(0);
    CHECK(std::abs(fine - coarse) / fine < 0.005);

    // quadrature 4x4 -> 6x6 on a polynomial profile
    const Profile poly = Profile::polynomial({1.0, 0.2, 0.1}, 1.0);
    const Mesh2D mesh = build_mesh_2d(1.0, 16, 2);
    const double q4 =
        solve_steklov_2d(assemble_plate_forms(p, poly, mesh, 4), 1).values(0);
    const double q6 =
        solve_steklov_2d(assemble_plate_forms(p, poly, mesh, 6), 1).values(0);
    CHECK(oracles::rel_err(q4, q6) < 1e-8);
}

TEST_CASE("bicubic fields reproduce tensor cubics exactly") {
    const Mesh2D mesh = build_mesh_2d(1.0, 4, 2);
    const auto px = [](double x) { return 1.0 + 2.0 * x - x * x + 0.5 * x * x * x; };
    const auto dpx = [](double x) { return 2.0 - 2.0 * x + 1.5 * x * x; };
    const auto ddpx = [](double x) { return -2.0 + 3.0 * x; };
    const auto qy = [](double y) { return 2.0 - y + y * y + 0.3 * y * y * y; };
    const auto dqy = [](double y) { return -1.0 + 2.0 * y + 0.9 * y * y; };
    const auto ddqy = [](double y) { return 2.0 + 1.8 * y; };

    const BfsField f(mesh, interpolate_nodal(mesh, [&](double x, double y) {
                         return std::array<double, 4>{px(x) * qy(y), dpx(x) * qy(y),
                                                      px(x) * dqy(y), dpx(x) * dqy(y)};
                     }));

    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double x = ux(rng), y = ux(rng);
        const BfsField::Sample s = f.eval(x, y);
        CHECK(oracles::rel_err(s.value, px(x) * qy(y)) < 1e-12);
        CHECK(oracles::rel_err(s.dx, dpx(x) * qy(y)) < 1e-11);
        CHECK(oracles::rel_err(s.dy, px(x) * dqy(y)) < 1e-11);
        CHECK(oracles::rel_err(s.dxy, dpx(x) * dqy(y)) < 1e-11);
        CHECK(oracles::rel_err(s.dxx, ddpx(x) * qy(y)) < 1e-10);
        CHECK(oracles::rel_err(s.dyy, px(x) * ddqy(y)) < 1e-10);
    }

    // nodal property: a lone value coefficient is reproduced untouched
    Eigen::VectorXd spike = Eigen::VectorXd::Zero(mesh.dof_count());
    spike(4 * mesh.node_id(2, 1) + 0) = 1.0;
    const BfsField g(mesh, spike);
    CHECK(g.eval(mesh.x_nodes[2], mesh.y_nodes[1]).value == 1.0);
    CHECK(g.eval(mesh.x_nodes[2], mesh.y_nodes[1]).dx == 0.0);

    CHECK_THROWS_AS(f.eval(1.2, 0.0), Error);
    CHECK_THROWS_AS(f.eval(0.0, -1.2), Error);
}
