#pragma once

#include <Eigen/Dense>

#include "wbc/errors.hpp"

namespace wbc {

/// Default relative rank cutoff: singular values below tol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-9;

/// Rank-revealing SVD of a (possibly empty) matrix. Bases have orthonormal
/// columns; the cutoff used to decide the rank is the one passed to
/// rank_reveal().
class RankRevealing {
 public:
  RankRevealing() = default;

  int rank() const { return rank_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  /// m x rank, spans range(A).
  Eigen::MatrixXd range_basis() const { return U_.leftCols(rank_); }
  /// n x (n - rank), spans null(A).
  Eigen::MatrixXd null_basis() const { return V_.rightCols(cols_ - rank_); }
  /// Non-negative, descending.
  const Eigen::VectorXd& singular_values() const { return sv_; }

  /// Moore-Penrose pseudoinverse at the stored rank cutoff.
  Eigen::MatrixXd pinv() const;
  /// Minimum-norm least-squares solution of A x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Tikhonov-damped solution (singular-value filter s/(s^2+lambda^2) over
  /// the retained rank); lambda = 0 reduces to solve().
  Eigen::VectorXd damped_solve(const Eigen::VectorXd& b, double lambda) const;
  /// || A - U S V^T || (for reconstruction checks).
  double reconstruction_error(const Eigen::MatrixXd& A) const;

 private:
  friend RankRevealing rank_reveal(const Eigen::MatrixXd&, double, double);
  Eigen::MatrixXd U_, V_;  // V is full n x n so the null basis is available
  Eigen::VectorXd sv_;
  int rank_ = 0;
  Eigen::Index rows_ = 0, cols_ = 0;
};

/// SVD with relative rank cutoff: singular values <= max(tol * sigma_max,
/// floor) count as zero. The absolute `floor` matters when A is a projection
/// of a larger matrix onto a subspace it barely intersects: the projected
/// values are then pure roundoff and a cutoff relative to their own maximum
/// would keep them. Pass floor = tol * (scale of the unprojected matrix).
/// Throws InvalidMatrix on non-finite input. Empty inputs (0 rows or 0
/// columns) are legal: rank 0, identity null basis.
RankRevealing rank_reveal(const Eigen::MatrixXd& A, double tol = kRankTol,
                          double floor = 0.0);

Eigen::MatrixXd pinv(const Eigen::MatrixXd& A, double tol = kRankTol);

/// W^(1/2) (A W^(1/2))^+ with W symmetric positive-definite (symmetric square
/// root). Reduces to pinv(A) at W = I. Throws NotPositiveDefinite.
Eigen::MatrixXd weighted_pinv(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                              double tol = kRankTol);

/// Symmetric matrix power of an SPD matrix (eigendecomposition route).
Eigen::MatrixXd spd_power(const Eigen::MatrixXd& W, double exponent);

/// Number of rank_reveal calls made by this thread. Lets tests pin the
/// decomposition budget of the sparse pipeline and keeps benchmarks honest.
long decomposition_count();

}  // namespace wbc
