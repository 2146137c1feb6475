#include "wbc/decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace wbc {

namespace {
thread_local long g_decomp_count = 0;
}

long decomposition_count() { return g_decomp_count; }

Eigen::MatrixXd RankRevealing::pinv() const {
  if (rank_ == 0) return Eigen::MatrixXd::Zero(cols_, rows_);
  return V_.leftCols(rank_) * sv_.head(rank_).cwiseInverse().asDiagonal() *
         U_.leftCols(rank_).transpose();
}

Eigen::VectorXd RankRevealing::solve(const Eigen::VectorXd& b) const {
  if (rank_ == 0) return Eigen::VectorXd::Zero(cols_);
  return V_.leftCols(rank_) *
         (sv_.head(rank_).cwiseInverse().asDiagonal() * (U_.leftCols(rank_).transpose() * b));
}

Eigen::VectorXd RankRevealing::damped_solve(const Eigen::VectorXd& b, double lambda) const {
  if (rank_ == 0) return Eigen::VectorXd::Zero(cols_);
  Eigen::VectorXd filter(rank_);
  for (int i = 0; i < rank_; ++i)
    filter(i) = sv_(i) / (sv_(i) * sv_(i) + lambda * lambda);
  return V_.leftCols(rank_) *
         (filter.asDiagonal() * (U_.leftCols(rank_).transpose() * b));
}

double RankRevealing::reconstruction_error(const Eigen::MatrixXd& A) const {
  Eigen::Index k = std::min(rows_, cols_);
  Eigen::MatrixXd R = U_.leftCols(k) * sv_.asDiagonal() * V_.leftCols(k).transpose();
  return (A - R).norm();
}

RankRevealing rank_reveal(const Eigen::MatrixXd& A, double tol, double floor) {
  if (!A.allFinite()) throw InvalidMatrix("rank_reveal: non-finite entries");
  if (tol <= 0.0) throw InvalidMatrix("rank_reveal: tol must be > 0");
  ++g_decomp_count;

  RankRevealing r;
  r.rows_ = A.rows();
  r.cols_ = A.cols();
  if (A.rows() == 0 || A.cols() == 0) {
    r.U_ = Eigen::MatrixXd::Identity(A.rows(), A.rows());
    r.V_ = Eigen::MatrixXd::Identity(A.cols(), A.cols());
    r.sv_ = Eigen::VectorXd::Zero(std::min(A.rows(), A.cols()));
    r.rank_ = 0;
    return r;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
  r.U_ = svd.matrixU();
  r.V_ = svd.matrixV();
  r.sv_ = svd.singularValues();
  const double cutoff = std::max(tol * r.sv_(0), floor);
  r.rank_ = 0;
  for (Eigen::Index i = 0; i < r.sv_.size(); ++i)
    if (r.sv_(i) > cutoff) ++r.rank_;
  return r;
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& A, double tol) {
  return rank_reveal(A, tol).pinv();
}

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& W, double exponent) {
  if (W.rows() != W.cols()) throw DimensionError("spd_power: matrix not square");
  if (!W.allFinite()) throw InvalidMatrix("spd_power: non-finite entries");
  if (W.rows() == 0) return W;
  if ((W - W.transpose()).norm() > 1e-10 * (1.0 + W.norm()))
    throw NotPositiveDefinite("spd_power: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
  if (es.info() != Eigen::Success)
    throw NotPositiveDefinite("spd_power: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite("spd_power: matrix not positive-definite");
  return es.eigenvectors() *
         es.eigenvalues().array().pow(exponent).matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::MatrixXd weighted_pinv(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                              double tol) {
  if (W.rows() != A.cols())
    throw DimensionError("weighted_pinv: W must be n x n for an m x n A");
  Eigen::MatrixXd Wh = spd_power(W, 0.5);
  return Wh * pinv(A * Wh, tol);
}

}  // namespace wbc
