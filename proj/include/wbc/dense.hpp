#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wbc/constraints.hpp"
#include "wbc/lexls.hpp"
#include "wbc/model.hpp"

namespace wbc {

/// Stacked dynamics + constraints D y = d over y = [qdd; f_c; tau]:
/// D = [[M, -J_c^T, -S^T], [J_c, 0, 0]], d = [-h; c_c].
struct DenseProblem {
  Eigen::MatrixXd D;
  Eigen::VectorXd d;
  int nv = 0, kf = 0, ks = 0, n = 0;

  int y_dim() const { return nv + kf + ks + n; }
  int qdd_offset() const { return 0; }
  int ff_offset() const { return nv; }
  int fs_offset() const { return nv + kf; }
  int tau_offset() const { return nv + kf + ks; }
};

DenseProblem build_dense(const RobotModel& model, const RobotState& state,
                         const ConstraintSet& cs);

/// Lifts a task on qdd (nv columns) / f_f (k_f columns) into y coordinates.
TaskLevel embed_motion_level(const DenseProblem& dp, const TaskLevel& level);
TaskLevel embed_force_level(const DenseProblem& dp, const TaskLevel& level);

/// Measurement convention for rank-deficient J_f: pins the component of f_f
/// invisible to the dynamics to the measured value, as one exactly-satisfiable
/// level placed above every task. Uf is the orthonormal range basis of J_f.
TaskLevel measurement_pin_level(const DenseProblem& dp, const Eigen::MatrixXd& Uf,
                                const Eigen::VectorXd& f_hat, int priority);

struct DenseSolution {
  Eigen::VectorXd y, qdd, ff, fs, tau;
  std::vector<double> residuals;
  int nullspace_dim = 0;  // dim null(D) = n + k - rank(J_c)
};

/// Reference solver: y* = D^+ d, K = null(D), lexicographic solve over z_D.
/// Throws InfeasibleConstraints when D y* != d beyond tolerance.
DenseSolution dense_lex_solve(const DenseProblem& dp, const std::vector<TaskLevel>& levels_y,
                              double tol = 1e-9);

struct BenchReport {
  int n = 0, ks = 0, kf = 0, base_dim = 6;
  int repetitions = 0;
  double sparse_ms = 0.0;       // median over repetitions of the four-SVD pipeline
  double dense_ms = 0.0;        // median over repetitions of decomposing D
  double sparse_iqr_ms = 0.0;   // interquartile range, timing-stability diagnostic
  double dense_iqr_ms = 0.0;
  double ratio = 0.0;           // dense / sparse
};

/// Times only the problem-reformulation decompositions (sparse pipeline vs
/// decomposing D) on one random sufficiently-constrained instance of the
/// given size. Wall-clock medians, single-threaded.
BenchReport bench(int n, int ks, int kf, int repetitions, std::uint64_t seed = 12345,
                  int base_dim = 6);

}  // namespace wbc
