#include "wbc/dense.hpp"

#include <algorithm>
#include <chrono>

#include "wbc/decomp.hpp"
#include "wbc/dynamics.hpp"
#include "wbc/instances.hpp"
#include "wbc/solver.hpp"

namespace wbc {

DenseProblem build_dense(const RobotModel& model, const RobotState& state,
                         const ConstraintSet& cs) {
  DenseProblem dp;
  dp.nv = model.nv();
  dp.kf = cs.kf();
  dp.ks = cs.ks();
  dp.n = model.joint_count();
  const int k = dp.kf + dp.ks;

  Eigen::MatrixXd M = mass_matrix(model, state);
  Eigen::VectorXd h = bias_forces(model, state);
  Eigen::MatrixXd Jc = cs.Jc();

  dp.D = Eigen::MatrixXd::Zero(dp.nv + k, dp.y_dim());
  dp.D.topLeftCorner(dp.nv, dp.nv) = M;
  dp.D.block(0, dp.ff_offset(), dp.nv, k) = -Jc.transpose();
  dp.D.block(0, dp.tau_offset(), dp.nv, dp.n).bottomRows(dp.n) =
      -Eigen::MatrixXd::Identity(dp.n, dp.n);  // -S^T
  dp.D.block(dp.nv, 0, k, dp.nv) = Jc;

  dp.d = Eigen::VectorXd::Zero(dp.nv + k);
  dp.d.head(dp.nv) = -h;
  dp.d.tail(k) = cs.cc();
  return dp;
}

TaskLevel embed_motion_level(const DenseProblem& dp, const TaskLevel& level) {
  if (level.A.cols() != dp.nv)
    throw DimensionError("embed_motion_level: level must have nv columns");
  TaskLevel out = level;
  out.A = Eigen::MatrixXd::Zero(level.A.rows(), dp.y_dim());
  out.A.leftCols(dp.nv) = level.A;
  return out;
}

TaskLevel embed_force_level(const DenseProblem& dp, const TaskLevel& level) {
  if (level.A.cols() != dp.kf)
    throw DimensionError("embed_force_level: level must have k_f columns");
  TaskLevel out = level;
  out.A = Eigen::MatrixXd::Zero(level.A.rows(), dp.y_dim());
  out.A.middleCols(dp.ff_offset(), dp.kf) = level.A;
  return out;
}

TaskLevel measurement_pin_level(const DenseProblem& dp, const Eigen::MatrixXd& Uf,
                                const Eigen::VectorXd& f_hat, int priority) {
  Eigen::MatrixXd proj =
      Eigen::MatrixXd::Identity(dp.kf, dp.kf) - Uf * Uf.transpose();
  TaskLevel lv;
  lv.A = proj;
  lv.target = proj * f_hat;
  lv.priority = priority;
  lv.kind = TaskKind::Force;
  lv.label = "f_f measurement pin";
  return embed_force_level(dp, lv);
}

DenseSolution dense_lex_solve(const DenseProblem& dp, const std::vector<TaskLevel>& levels_y,
                              double tol) {
  auto svd = rank_reveal(dp.D, tol);
  Eigen::VectorXd y_star = svd.solve(dp.d);
  double feas_scale = dp.D.norm() * y_star.norm() + dp.d.norm();
  if ((dp.D * y_star - dp.d).norm() > 1e-8 * (1.0 + feas_scale))
    throw InfeasibleConstraints("dense_lex_solve: D y = d has no solution");
  Eigen::MatrixXd K = svd.null_basis();

  std::vector<TaskLevel> reduced;
  reduced.reserve(levels_y.size());
  for (const auto& lv : levels_y) {
    if (lv.A.cols() != dp.y_dim())
      throw DimensionError("dense_lex_solve: level '" + lv.label + "' width mismatch");
    TaskLevel r = lv;
    r.A = lv.A * K;
    r.target = lv.target - lv.A * y_star;
    if (r.scale == 0.0) r.scale = lv.A.norm();
    reduced.push_back(std::move(r));
  }
  auto sol = lex_solve(sorted_by_priority(std::move(reduced)),
                       static_cast<int>(K.cols()), tol);

  DenseSolution out;
  out.y = y_star + K * sol.z;
  out.qdd = out.y.segment(dp.qdd_offset(), dp.nv);
  out.ff = out.y.segment(dp.ff_offset(), dp.kf);
  out.fs = out.y.segment(dp.fs_offset(), dp.ks);
  out.tau = out.y.segment(dp.tau_offset(), dp.n);
  out.residuals = std::move(sol.residuals);
  out.nullspace_dim = static_cast<int>(K.cols());
  return out;
}

namespace {

double median_ms(std::vector<double>& samples) {
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  return n == 0 ? 0.0 : (n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]));
}

double iqr_ms(std::vector<double>& sorted) {
  if (sorted.size() < 4) return 0.0;
  return sorted[(3 * sorted.size()) / 4] - sorted[sorted.size() / 4];
}

}  // namespace

BenchReport bench(int n, int ks, int kf, int repetitions, std::uint64_t seed, int base_dim) {
  std::mt19937_64 rng(seed);
  RandomInstance inst = sized_instance(rng, base_dim, n, ks, kf);
  DenseProblem dp = build_dense(inst.model, inst.state, inst.constraints);
  SolverOptions opts;

  using clock = std::chrono::steady_clock;
  std::vector<double> sparse_samples, dense_samples;
  sparse_samples.reserve(repetitions);
  dense_samples.reserve(repetitions);

  // keep a data dependency on each timed result so the work is not dead code
  double sink = 0.0;
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = clock::now();
    SparseDecomposition dec = decompose(inst.constraints, base_dim, opts);
    auto t1 = clock::now();
    sink += dec.Zc.col(0).sum();
    sparse_samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = clock::now();
    auto svd = rank_reveal(dp.D);
    auto t1 = clock::now();
    sink += svd.singular_values()(0);
    dense_samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  if (!std::isfinite(sink)) throw Error("bench: non-finite decomposition results");

  BenchReport rep;
  rep.n = n;
  rep.ks = ks;
  rep.kf = kf;
  rep.base_dim = base_dim;
  rep.repetitions = repetitions;
  rep.sparse_ms = median_ms(sparse_samples);
  rep.dense_ms = median_ms(dense_samples);
  rep.sparse_iqr_ms = iqr_ms(sparse_samples);
  rep.dense_iqr_ms = iqr_ms(dense_samples);
  rep.ratio = rep.sparse_ms > 0.0 ? rep.dense_ms / rep.sparse_ms : 0.0;
  return rep;
}

}  // namespace wbc
