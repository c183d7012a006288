#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace steklab {

// ===== symmetric pencils with essential constraints =====
//
// A SymmetricMatrix owns a full-size symmetric matrix together with an
// activity mask. Masked (inactive) rows and columns carry essential boundary
// conditions; all algebra runs on the active submatrix and results are
// re-expanded with zeros in the masked slots.

class SymmetricMatrix {
  public:
    // Throws std::invalid_argument if the matrix is not square, the mask
    // length differs from the dimension, or max |A - A^T| exceeds
    // 1e-12 * max |A|. The stored matrix is symmetrized exactly.
    SymmetricMatrix(Eigen::MatrixXd full, std::vector<std::uint8_t> active);

    int dim() const { return static_cast<int>(full_.rows()); }
    int active_dim() const { return static_cast<int>(active_index_.size()); }
    const Eigen::MatrixXd& full() const { return full_; }
    const std::vector<std::uint8_t>& mask() const { return active_; }

    Eigen::MatrixXd active_submatrix() const;

    // Drop masked entries of a full-length vector / keep only active columns
    // of a matrix with full-size column dimension.
    Eigen::VectorXd compress(const Eigen::VectorXd& full_vec) const;
    Eigen::MatrixXd compress_columns(const Eigen::MatrixXd& rows_by_full) const;

    // Scatter an active-length vector back to full length, zeros elsewhere.
    Eigen::VectorXd expand(const Eigen::VectorXd& active_vec) const;

  private:
    Eigen::MatrixXd full_;
    std::vector<std::uint8_t> active_;
    std::vector<int> active_index_;
};

struct EigenSolution {
    // Finite eigenvalues in ascending order, one column of vectors per value.
    // Vectors are full-length (zeros in masked slots) and B-orthonormal.
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    // ||A v - lambda B v||_2 / (||A||_F ||v||_2), per eigenpair.
    Eigen::VectorXd residuals;
    // Number of finite eigenvalues = rank of B on the active subspace.
    int finite_count = 0;
};

// Cholesky factor L (lower, A = L L^T) of the active submatrix. Hand-rolled
// so a failed pivot reports its index: throws Error(NotPositiveDefinite)
// with index() = position of the first nonpositive pivot in active numbering.
Eigen::MatrixXd factor_spd(const SymmetricMatrix& A);

// Solve A x = b on the active subspace, b full-length, result re-expanded.
// Throws NotPositiveDefinite (via factor_spd) or std::invalid_argument on a
// size mismatch.
Eigen::VectorXd solve_spd(const SymmetricMatrix& A, const Eigen::VectorXd& b);

// Dense symmetric eigendecomposition, ascending values. The input is
// symmetrized; throws Error(SingularSystem) if the solver fails.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> symmetric_eigs(const Eigen::MatrixXd& s);

// Smallest k_max finite eigenvalues of A v = lambda B v with A SPD on the
// active subspace and B PSD of low rank. Infinite eigenvalues (B null space)
// are filtered by the relative threshold mu < 1e-12 * mu_max on the inverted
// spectrum. Throws TooFewFinite when fewer than k_max finite values exist.
EigenSolution finite_pencil_eigs(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                 int k_max);

// Same, with B supplied through a factor G such that B = G^T G (rows of G are
// weighted trace functionals). G has full-size column dimension.
EigenSolution finite_pencil_eigs(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                 const Eigen::MatrixXd& g, int k_max);

} // namespace steklab
