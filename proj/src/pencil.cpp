#include "steklab/pencil.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "steklab/errors.hpp"

namespace steklab {

// ===== SymmetricMatrix =====

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd full, std::vector<std::uint8_t> active)
    : full_(std::move(full)), active_(std::move(active)) {
    if (full_.rows() != full_.cols())
        throw std::invalid_argument("SymmetricMatrix: matrix must be square");
    if (static_cast<int>(active_.size()) != full_.rows())
        throw std::invalid_argument("SymmetricMatrix: mask length must match dimension");
    const double amax = full_.size() ? full_.cwiseAbs().maxCoeff() : 0.0;
    const double skew =
        full_.size() ? (full_ - full_.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (skew > 1e-12 * amax)
        throw std::invalid_argument("SymmetricMatrix: matrix is not symmetric");
    full_ = (0.5 * (full_ + full_.transpose())).eval();
    active_index_.reserve(active_.size());
    for (int i = 0; i < static_cast<int>(active_.size()); ++i)
        if (active_[i]) active_index_.push_back(i);
}

Eigen::MatrixXd SymmetricMatrix::active_submatrix() const {
    const int m = active_dim();
    Eigen::MatrixXd sub(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            sub(i, j) = full_(active_index_[i], active_index_[j]);
    return sub;
}

Eigen::VectorXd SymmetricMatrix::compress(const Eigen::VectorXd& full_vec) const {
    if (full_vec.size() != full_.rows())
        throw std::invalid_argument("compress: vector length must match dimension");
    Eigen::VectorXd out(active_dim());
    for (int i = 0; i < active_dim(); ++i) out(i) = full_vec(active_index_[i]);
    return out;
}

Eigen::MatrixXd SymmetricMatrix::compress_columns(const Eigen::MatrixXd& rows_by_full) const {
    if (rows_by_full.cols() != full_.rows())
        throw std::invalid_argument("compress_columns: column count must match dimension");
    Eigen::MatrixXd out(rows_by_full.rows(), active_dim());
    for (int i = 0; i < active_dim(); ++i) out.col(i) = rows_by_full.col(active_index_[i]);
    return out;
}

Eigen::VectorXd SymmetricMatrix::expand(const Eigen::VectorXd& active_vec) const {
    if (active_vec.size() != active_dim())
        throw std::invalid_argument("expand: vector length must match active dimension");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(full_.rows());
    for (int i = 0; i < active_dim(); ++i) out(active_index_[i]) = active_vec(i);
    return out;
}

// ===== factorizations and solves =====

namespace {

// Right-looking Cholesky on the lower triangle. Kept by hand so a failed
// pivot reports its index; Eigen does the vectorized rank-1 updates.
Eigen::MatrixXd cholesky_lower(Eigen::MatrixXd c) {
    const int n = static_cast<int>(c.rows());
    for (int j = 0; j < n; ++j) {
        const double pivot = c(j, j);
        if (!(pivot > 0.0))
            throw Error(ErrorCode::NotPositiveDefinite,
                        "pivot " + std::to_string(pivot) + " at active index " +
                            std::to_string(j),
                        j);
        const double d = std::sqrt(pivot);
        c(j, j) = d;
        const int m = n - j - 1;
        if (m > 0) {
            c.col(j).tail(m) /= d;
            c.bottomRightCorner(m, m)
                .selfadjointView<Eigen::Lower>()
                .rankUpdate(c.col(j).tail(m), -1.0);
        }
    }
    c.triangularView<Eigen::StrictlyUpper>().setZero();
    return c;
}

} // namespace

Eigen::MatrixXd factor_spd(const SymmetricMatrix& a) {
    return cholesky_lower(a.active_submatrix());
}

Eigen::VectorXd solve_spd(const SymmetricMatrix& a, const Eigen::VectorXd& b) {
    if (b.size() != a.dim())
        throw std::invalid_argument("solve_spd: right-hand side length must match dimension");
    const Eigen::MatrixXd l = factor_spd(a);
    const Eigen::VectorXd bc = a.compress(b);
    const Eigen::VectorXd y = l.triangularView<Eigen::Lower>().solve(bc);
    const Eigen::VectorXd x = l.transpose().triangularView<Eigen::Upper>().solve(y);
    return a.expand(x);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> symmetric_eigs(const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols())
        throw std::invalid_argument("symmetric_eigs: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (s + s.transpose()));
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::SingularSystem, "symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// ===== pencil eigenvalues =====

namespace {

// Core reduction: with A = L L^T and B = G^T G, the finite eigenvalues of
// A v = lambda B v are the reciprocals of the nonzero eigenvalues of
// Y^T Y where Y = L^{-1} G^T (an r x r problem, r = rank bound of B).
// Eigenvectors come back exactly B-normalized: v = L^{-T} Y z / mu satisfies
// G v = S z / mu = z, hence v^T B v = |z|^2 = 1 for unit z.
EigenSolution pencil_core(const SymmetricMatrix& a, const SymmetricMatrix& b,
                          const Eigen::MatrixXd& g_active, int k_max) {
    if (k_max < 1)
        throw Error(ErrorCode::BadCount,
                    "k_max must be at least 1, got " + std::to_string(k_max));

    const Eigen::MatrixXd ac = a.active_submatrix();
    const Eigen::MatrixXd bc = b.active_submatrix();
    const Eigen::MatrixXd l = cholesky_lower(ac);
    const int r = static_cast<int>(g_active.rows());

    Eigen::MatrixXd y = l.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd(g_active.transpose()));
    Eigen::MatrixXd s = y.transpose() * y;
    auto [mu, z] = symmetric_eigs(s);

    const double mu_max = r > 0 ? mu(r - 1) : 0.0;
    const double threshold = 1e-12 * mu_max;
    int finite = 0;
    for (int i = 0; i < r; ++i)
        if (mu(i) > threshold && mu(i) > 0.0) ++finite;

    if (k_max > finite)
        throw Error(ErrorCode::TooFewFinite,
                    "requested " + std::to_string(k_max) + " eigenvalues but only " +
                        std::to_string(finite) + " are finite");

    EigenSolution sol;
    sol.finite_count = finite;
    sol.values.resize(k_max);
    sol.residuals.resize(k_max);
    sol.vectors.resize(a.dim(), k_max);

    const double a_norm = ac.norm();
    for (int j = 0; j < k_max; ++j) {
        // descending mu = ascending lambda
        const int idx = r - 1 - j;
        const double m = mu(idx);
        const Eigen::VectorXd yz = y * z.col(idx);
        Eigen::VectorXd v =
            l.transpose().triangularView<Eigen::Upper>().solve(yz) / m;
        // Rayleigh refinement: the quotient is stationary at eigenvectors, so
        // O(eps) vector noise from the triangular solves enters lambda only at
        // second order; 1/mu alone carries the full reduction roundoff.
        const Eigen::VectorXd av = ac * v;
        const Eigen::VectorXd bv = bc * v;
        const double lambda = v.dot(av) / v.dot(bv);
        const Eigen::VectorXd resid = av - lambda * bv;
        sol.values(j) = lambda;
        sol.residuals(j) = resid.norm() / (a_norm * v.norm());
        sol.vectors.col(j) = a.expand(v);
    }
    return sol;
}

} // namespace

EigenSolution finite_pencil_eigs(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                 const Eigen::MatrixXd& g, int k_max) {
    if (a.dim() != b.dim() || a.mask() != b.mask())
        throw std::invalid_argument("finite_pencil_eigs: A and B need matching masks");
    if (g.cols() != a.dim())
        throw std::invalid_argument("finite_pencil_eigs: factor column count must match dimension");
    return pencil_core(a, b, b.compress_columns(g), k_max);
}

EigenSolution finite_pencil_eigs(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                 int k_max) {
    if (a.dim() != b.dim() || a.mask() != b.mask())
        throw std::invalid_argument("finite_pencil_eigs: A and B need matching masks");
    // Factor the active B as G^T G through its eigendecomposition, dropping
    // the (roundoff) null space.
    auto [d, q] = symmetric_eigs(b.active_submatrix());
    const int m = static_cast<int>(d.size());
    const double d_max = m > 0 ? d(m - 1) : 0.0;
    if (m > 0 && d(0) < -1e-10 * std::max(d_max, 0.0) - 1e-300)
        throw std::invalid_argument("finite_pencil_eigs: B must be positive semidefinite");
    int rank = 0;
    for (int i = 0; i < m; ++i)
        if (d(i) > 1e-14 * d_max && d(i) > 0.0) ++rank;
    Eigen::MatrixXd g(rank, m);
    int row = 0;
    for (int i = 0; i < m; ++i)
        if (d(i) > 1e-14 * d_max && d(i) > 0.0)
            g.row(row++) = std::sqrt(d(i)) * q.col(i).transpose();
    return pencil_core(a, b, g, k_max);
}

} // namespace steklab
