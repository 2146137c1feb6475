#include "wbc/solver.hpp"

#include <chrono>
#include <future>
#include <sstream>

namespace wbc {

SparseDecomposition decompose(const ConstraintSet& cs, int base_dim,
                              const SolverOptions& opts) {
  SparseDecomposition dec;
  dec.nv = cs.cols();
  dec.base_dim = base_dim;
  dec.n = dec.nv - base_dim;
  dec.kf = cs.kf();
  dec.ks = cs.ks();
  const int nv = dec.nv, n = dec.n, b = base_dim;
  const double tol = opts.rank_tol;

  // the four decompositions of the sparse pipeline
  auto svd_s = rank_reveal(cs.Js(), tol);
  auto svd_f = rank_reveal(cs.Jf(), tol);
  dec.rank_s = svd_s.rank();
  dec.rank_f = svd_f.rank();
  dec.Zs = svd_s.null_basis();
  dec.Js_pinv = svd_s.pinv();
  dec.Uf = svd_f.range_basis();

  // projected blocks carry the scale of their parent matrices
  Eigen::MatrixXd JfZs = cs.Jf() * dec.Zs;
  auto svd_fs = rank_reveal(JfZs, tol, tol * cs.Jf().norm());
  // Sbar J_s^T = transpose of the base columns of J_s
  Eigen::MatrixXd SbarJsT = cs.Js().leftCols(b).transpose();
  auto svd_ss = rank_reveal(SbarJsT, tol, tol * cs.Js().norm());

  if (svd_ss.rank() != b) {
    std::ostringstream msg;
    msg << "not sufficiently constrained: rank(J_s Sbar^T) = " << svd_ss.rank()
        << ", need " << b;
    throw NotSufficientlyConstrained(msg.str());
  }
  // rank(J_c) = rank(J_s) + rank(J_f Z_s); independence <=> rank(J_f Z_s) = rank(J_f)
  if (svd_fs.rank() != dec.rank_f)
    throw DependentConstraints("controlled and supporting constraints are not independent");
  dec.rank_c = dec.rank_s + dec.rank_f;

  dec.Zfs = svd_fs.null_basis();
  dec.Zc = dec.Zs * dec.Zfs;

  // J_c^+ = [ Z_s (J_f Z_s)^+ , (I - Z_s (J_f Z_s)^+ J_f) J_s^+ ]
  Eigen::MatrixXd Bf = dec.Zs * svd_fs.pinv();
  dec.Jc_pinv.resize(nv, dec.kf + dec.ks);
  dec.Jc_pinv.leftCols(dec.kf) = Bf;
  dec.Jc_pinv.rightCols(dec.ks) = dec.Js_pinv - Bf * (cs.Jf() * dec.Js_pinv);

  // (Z_s^T S^T)^+ Z_s^T = [ -S J_s^T (Sbar J_s^T)^+ , I ], exact up to a
  // null(Z_s^T S^T) component; subtracting the Z_ss part recovers the
  // Moore-Penrose value for rank_s > base_dim.
  Eigen::MatrixXd P(n, nv);
  P.leftCols(b) = -cs.Js().rightCols(n).transpose() * svd_ss.pinv();
  P.rightCols(n) = Eigen::MatrixXd::Identity(n, n);

  if (dec.rank_s > b) {
    Eigen::MatrixXd V0 = svd_ss.null_basis();             // k_s x (k_s - b)
    Eigen::MatrixXd C = cs.Js().rightCols(n).transpose() * V0;  // S J_s^T V0
    dec.Zss = rank_reveal(C, tol, tol * cs.Js().norm()).range_basis();
    P = P - dec.Zss * (dec.Zss.transpose() * P);
  } else {
    dec.Zss.resize(n, 0);
  }
  dec.torque_projector = P;
  return dec;
}

MotionSolution solve_motion(const SparseDecomposition& dec, const ConstraintSet& cs,
                            const std::vector<TaskLevel>& motion_levels,
                            const SolverOptions& opts) {
  Eigen::VectorXd qdd_part = dec.Jc_pinv * cs.cc();
  std::vector<TaskLevel> reduced;
  reduced.reserve(motion_levels.size());
  for (const auto& lv : motion_levels) {
    if (lv.A.cols() != dec.nv)
      throw DimensionError("solve_motion: level '" + lv.label + "' must have nv columns");
    TaskLevel r = lv;
    r.A = lv.A * dec.Zc;
    r.target = lv.target - lv.A * qdd_part;
    if (r.scale == 0.0) r.scale = lv.A.norm();
    if (opts.damping > 0.0 && r.damping == 0.0) r.damping = opts.damping;
    reduced.push_back(std::move(r));
  }
  auto sol = lex_solve(sorted_by_priority(std::move(reduced)), dec.zc_dim(), opts.rank_tol);
  MotionSolution out;
  out.zc = sol.z;
  out.qdd = qdd_part + dec.Zc * sol.z;
  out.residuals = std::move(sol.residuals);
  return out;
}

ForceSolution solve_force(const SparseDecomposition& dec,
                          const std::vector<TaskLevel>& force_levels,
                          const std::optional<Eigen::VectorXd>& f_hat,
                          const SolverOptions& opts) {
  ForceSolution out;
  if (dec.kf == 0) {
    out.zf.resize(0);
    out.ff.resize(0);
    out.residuals.assign(force_levels.size(), 0.0);
    return out;
  }
  const bool deficient = dec.rank_f < dec.kf;
  if (deficient && !f_hat)
    throw MissingForceMeasurement(
        "solve_force: J_f is rank-deficient, a force measurement is required");
  Eigen::VectorXd fpart = Eigen::VectorXd::Zero(dec.kf);
  if (deficient) {
    if (f_hat->size() != dec.kf)
      throw DimensionError("solve_force: f_hat size mismatch");
    fpart = *f_hat - dec.Uf * (dec.Uf.transpose() * *f_hat);
  }

  std::vector<TaskLevel> reduced;
  reduced.reserve(force_levels.size());
  for (const auto& lv : force_levels) {
    if (lv.A.cols() != dec.kf)
      throw DimensionError("solve_force: level '" + lv.label + "' must have k_f columns");
    TaskLevel r = lv;
    r.A = lv.A * dec.Uf;
    r.target = lv.target - lv.A * fpart;
    if (r.scale == 0.0) r.scale = lv.A.norm();
    if (opts.damping > 0.0 && r.damping == 0.0) r.damping = opts.damping;
    reduced.push_back(std::move(r));
  }
  auto sol = lex_solve(sorted_by_priority(std::move(reduced)), dec.zf_dim(), opts.rank_tol);
  out.zf = sol.z;
  out.ff = dec.Uf * sol.z + fpart;
  out.residuals = std::move(sol.residuals);
  return out;
}

namespace {

void check_compatible(const RobotModel& model, const SparseDecomposition& dec,
                      const ConstraintSet& cs) {
  if (dec.nv != model.nv() || dec.kf != cs.kf() || dec.ks != cs.ks() ||
      dec.base_dim != model.base_dim())
    throw StaleDecomposition("decomposition does not match the model/constraint dimensions");
}

// M qdd + h - J_f^T f_f along the requested path
Eigen::VectorXd tau1_full(const RobotModel& model, const RobotState& state,
                          const ConstraintSet& cs, const Eigen::VectorXd& qdd,
                          const Eigen::VectorXd& ff, TorquePath path) {
  Eigen::VectorXd mh;
  if (path == TorquePath::Rnea) {
    mh = inverse_dynamics(model, state, qdd);
  } else {
    mh = mass_matrix(model, state) * qdd + bias_forces(model, state);
  }
  if (cs.kf() > 0) mh -= cs.Jf().transpose() * ff;
  return mh;
}

}  // namespace

Eigen::VectorXd recover_torques(const RobotModel& model, const RobotState& state,
                                const SparseDecomposition& dec, const ConstraintSet& cs,
                                const Eigen::VectorXd& qdd, const Eigen::VectorXd& ff,
                                const Eigen::VectorXd& zss, TorquePath path) {
  check_compatible(model, dec, cs);
  Eigen::VectorXd tau1 = tau1_full(model, state, cs, qdd, ff, path);
  Eigen::VectorXd tau = dec.torque_projector * tau1;
  if (zss.size() > 0) {
    if (zss.size() != dec.zss_dim())
      throw DimensionError("recover_torques: zss size mismatch");
    tau += dec.Zss * zss;
  }
  return tau;
}

Eigen::VectorXd optimize_supporting_forces(const RobotModel& model, const RobotState& state,
                                           const SparseDecomposition& dec,
                                           const ConstraintSet& cs, const Eigen::VectorXd& qdd,
                                           const Eigen::VectorXd& ff,
                                           const Eigen::MatrixXd& wf_inv) {
  check_compatible(model, dec, cs);
  if (dec.zss_dim() == 0)  // trivial nullspace: unique torque, nothing to optimize
    return recover_torques(model, state, dec, cs, qdd, ff);
  if (wf_inv.rows() != cs.ks() || wf_inv.cols() != cs.ks())
    throw DimensionError("optimize_supporting_forces: W_f^{-1} must be k_s x k_s");
  if ((wf_inv - wf_inv.transpose()).norm() > 1e-10 * (1.0 + wf_inv.norm()))
    throw NotPositiveDefinite("optimize_supporting_forces: W_f^{-1} not symmetric");
  Eigen::LLT<Eigen::MatrixXd> wf_llt(wf_inv);
  if (wf_llt.info() != Eigen::Success)
    throw NotPositiveDefinite("optimize_supporting_forces: W_f^{-1} not positive-definite");

  const int n = dec.n, nv = dec.nv;
  Eigen::VectorXd tau1 = tau1_full(model, state, cs, qdd, ff, TorquePath::Rnea);

  // G = J_s^+ W_f^{-1} J_s^{T+} + Z_s Z_s^T; the Z_s term vanishes on the
  // feasible torque family and only regularizes S G S^T.
  Eigen::MatrixXd G = dec.Js_pinv * wf_inv * dec.Js_pinv.transpose() +
                      dec.Zs * dec.Zs.transpose();
  Eigen::MatrixXd SGS = G.bottomRightCorner(n, n);  // S G S^T for S = [0 I]
  Eigen::LLT<Eigen::MatrixXd> llt(SGS);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("optimize_supporting_forces: S G S^T not positive-definite");
  Eigen::MatrixXd W = llt.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd tau0 = W * (G * tau1).tail(n);

  // B = Z_s^T S^T; tau = B^{+W} Z_s^T tau1 + (I - B^{+W} B) tau0. The free
  // component uses the W-oblique projector onto null(B): the orthogonal
  // projector would not minimize the weighted cost.
  Eigen::MatrixXd B = dec.Zs.bottomRows(n).transpose();
  Eigen::MatrixXd BpW = weighted_pinv(B, W);
  Eigen::VectorXd tau = BpW * (dec.Zs.transpose() * tau1) + (tau0 - BpW * (B * tau0));
  return tau;
}

Eigen::VectorXd recover_fs(const RobotModel& model, const RobotState& state,
                           const ConstraintSet& cs, const Eigen::VectorXd& qdd,
                           const Eigen::VectorXd& ff, const Eigen::VectorXd& tau,
                           double tol) {
  Eigen::VectorXd rhs = inverse_dynamics(model, state, qdd);
  if (cs.kf() > 0) rhs -= cs.Jf().transpose() * ff;
  rhs.tail(model.joint_count()) -= tau;
  auto svd = rank_reveal(cs.Js().transpose());
  Eigen::VectorXd fs = svd.solve(rhs);
  double residual = (cs.Js().transpose() * fs - rhs).norm();
  if (residual > tol * (1.0 + rhs.norm()))
    throw InconsistentDynamics("recover_fs: dynamics residual not in range(J_s^T)");
  return fs;
}

ControlSolution control_tick(const RobotModel& model, const RobotState& state,
                             const ConstraintSet& cs, const std::vector<TaskLevel>& levels,
                             const std::optional<Eigen::VectorXd>& f_hat,
                             const SolverOptions& opts) {
  using clock = std::chrono::steady_clock;
  std::vector<TaskLevel> motion, force;
  for (const auto& lv : levels) {
    switch (lv.kind) {
      case TaskKind::Motion: motion.push_back(lv); break;
      case TaskKind::Force: force.push_back(lv); break;
      default:
        throw DimensionError("control_tick: level '" + lv.label +
                             "' must be tagged Motion or Force");
    }
  }

  ControlSolution out;
  auto t0 = clock::now();
  SparseDecomposition dec = decompose(cs, model.base_dim(), opts);
  auto t1 = clock::now();

  MotionSolution ms;
  ForceSolution fs;
  if (opts.parallel) {
    auto motion_future = std::async(std::launch::async, [&] {
      return solve_motion(dec, cs, motion, opts);
    });
    fs = solve_force(dec, force, f_hat, opts);
    ms = motion_future.get();
  } else {
    ms = solve_motion(dec, cs, motion, opts);
    fs = solve_force(dec, force, f_hat, opts);
  }

  if (opts.wf_inv.size() > 0 && dec.zss_dim() > 0) {
    out.tau = optimize_supporting_forces(model, state, dec, cs, ms.qdd, fs.ff, opts.wf_inv);
  } else {
    out.tau = recover_torques(model, state, dec, cs, ms.qdd, fs.ff, Eigen::VectorXd(),
                              opts.torque_path);
  }
  auto t2 = clock::now();

  out.qdd = std::move(ms.qdd);
  out.ff = std::move(fs.ff);
  out.zc = std::move(ms.zc);
  out.zf = std::move(fs.zf);
  out.zss = dec.Zss.transpose() * out.tau;  // torque projector rows are Z_ss-free
  out.motion_residuals = std::move(ms.residuals);
  out.force_residuals = std::move(fs.residuals);
  out.constraint_violation = (cs.Jc() * out.qdd - cs.cc()).norm();
  out.decompose_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
  return out;
}

}  // namespace wbc
