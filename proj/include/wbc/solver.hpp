#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wbc/constraints.hpp"
#include "wbc/decomp.hpp"
#include "wbc/dynamics.hpp"
#include "wbc/lexls.hpp"
#include "wbc/model.hpp"

namespace wbc {

enum class TorquePath { Rnea, MassMatrix };

struct SolverOptions {
  double rank_tol = 1e-9;
  double damping = 0.0;             // per-level Tikhonov damping in the cascades
  bool parallel = false;            // solve the force and motion hierarchies concurrently
  TorquePath torque_path = TorquePath::Rnea;
  // Supporting-force optimization weight W_f^{-1} (k_s x k_s); empty disables it.
  Eigen::MatrixXd wf_inv;
};

/// Cached bases and inverses from one control tick. Built from exactly four
/// rank-revealing decompositions (J_s, J_f, J_f Z_s, Sbar J_s^T) plus, when
/// k_s > base_dim, one small orthonormalization for Z_ss; J_c and Z_s^T S^T
/// are never decomposed directly.
struct SparseDecomposition {
  int nv = 0, base_dim = 0, n = 0, kf = 0, ks = 0;
  int rank_s = 0, rank_f = 0, rank_c = 0;

  Eigen::MatrixXd Zs;         // nv x (nv - rank_s), nullspace of J_s
  Eigen::MatrixXd Uf;         // kf x rank_f, range of J_f
  Eigen::MatrixXd Zfs;        // nullspace of J_f Z_s
  Eigen::MatrixXd Zc;         // nv x (nv - rank_c), nullspace of J_c (= Z_s Z_fs)
  Eigen::MatrixXd Jc_pinv;    // nv x k, from the block identity
  Eigen::MatrixXd Js_pinv;    // nv x ks (reused by Eq.12 and f_s recovery)
  Eigen::MatrixXd torque_projector;  // n x nv: (Z_s^T S^T)^+ Z_s^T
  Eigen::MatrixXd Zss;        // n x (rank_s - base_dim), nullspace of Z_s^T S^T

  int zc_dim() const { return nv - rank_c; }
  int zf_dim() const { return rank_f; }
  int zss_dim() const { return static_cast<int>(Zss.cols()); }
};

/// Throws NotSufficientlyConstrained / DependentConstraints; both conditions
/// are read off the four decompositions, no extra rank computations.
SparseDecomposition decompose(const ConstraintSet& cs, int base_dim,
                              const SolverOptions& opts = {});

struct MotionSolution {
  Eigen::VectorXd zc;
  Eigen::VectorXd qdd;
  std::vector<double> residuals;
};

struct ForceSolution {
  Eigen::VectorXd zf;
  Eigen::VectorXd ff;
  std::vector<double> residuals;
};

/// Motion hierarchy over z_c: qdd = J_c^+ c_c + Z_c z_c. Levels carry task
/// matrices over qdd (nv columns).
MotionSolution solve_motion(const SparseDecomposition& dec, const ConstraintSet& cs,
                            const std::vector<TaskLevel>& motion_levels,
                            const SolverOptions& opts = {});

/// Force hierarchy over z_f: f_f = U_f z_f + (I - U_f U_f^T) f_hat. Levels
/// carry task matrices over f_f (k_f columns). f_hat is required only when
/// J_f is rank-deficient (throws MissingForceMeasurement otherwise).
ForceSolution solve_force(const SparseDecomposition& dec,
                          const std::vector<TaskLevel>& force_levels,
                          const std::optional<Eigen::VectorXd>& f_hat = std::nullopt,
                          const SolverOptions& opts = {});

/// tau = (Z_s^T S^T)^+ Z_s^T (M qdd + h - J_f^T f_f) + Z_ss z_ss. The Rnea
/// path evaluates M qdd + h recursively without forming M; both paths agree
/// to solver precision. Default z_ss = 0 (empty vector).
Eigen::VectorXd recover_torques(const RobotModel& model, const RobotState& state,
                                const SparseDecomposition& dec, const ConstraintSet& cs,
                                const Eigen::VectorXd& qdd, const Eigen::VectorXd& ff,
                                const Eigen::VectorXd& zss = Eigen::VectorXd(),
                                TorquePath path = TorquePath::Rnea);

/// Picks the z_ss that minimizes f_s^T W_f^{-1} f_s (supporting-force
/// optimization). Falls back to recover_torques when Z_s^T S^T has a trivial
/// nullspace. Throws NotPositiveDefinite on a bad weight.
Eigen::VectorXd optimize_supporting_forces(const RobotModel& model, const RobotState& state,
                                           const SparseDecomposition& dec,
                                           const ConstraintSet& cs, const Eigen::VectorXd& qdd,
                                           const Eigen::VectorXd& ff,
                                           const Eigen::MatrixXd& wf_inv);

/// Minimum-norm supporting forces from the dynamics residual
/// J_s^T f_s = M qdd + h - J_f^T f_f - S^T tau. Diagnostic / oracle helper;
/// throws InconsistentDynamics when the residual is not in range(J_s^T).
Eigen::VectorXd recover_fs(const RobotModel& model, const RobotState& state,
                           const ConstraintSet& cs, const Eigen::VectorXd& qdd,
                           const Eigen::VectorXd& ff, const Eigen::VectorXd& tau,
                           double tol = 1e-6);

struct ControlSolution {
  Eigen::VectorXd qdd, ff, tau;
  Eigen::VectorXd zc, zf, zss;
  std::vector<double> motion_residuals, force_residuals;
  double constraint_violation = 0.0;  // ||J_c qdd - c_c||
  double decompose_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// One full tick: decompose, solve the two independent hierarchies (in
/// parallel when opts.parallel), recover torques (optimized when opts.wf_inv
/// is set and the nullspace is nontrivial). Levels must be tagged Motion or
/// Force; Motion levels have nv columns, Force levels k_f columns.
ControlSolution control_tick(const RobotModel& model, const RobotState& state,
                             const ConstraintSet& cs, const std::vector<TaskLevel>& levels,
                             const std::optional<Eigen::VectorXd>& f_hat = std::nullopt,
                             const SolverOptions& opts = {});

}  // namespace wbc
