#include "wbc/tasks.hpp"

namespace wbc {

TrajectorySample min_jerk(const Trajectory& traj, double t) {
  if (!(traj.duration > 0.0)) throw InvalidDuration("min_jerk: duration must be > 0");
  if (traj.x0.size() != traj.xf.size())
    throw DimensionError("min_jerk: endpoint size mismatch");
  const double T = traj.duration;
  double s = std::clamp(t / T, 0.0, 1.0);
  const double s3 = s * s * s, s4 = s3 * s, s5 = s4 * s;
  const double p = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const double dp = (30.0 * s * s - 60.0 * s3 + 30.0 * s4) / T;
  const double ddp = (60.0 * s - 180.0 * s * s + 120.0 * s3) / (T * T);
  Eigen::VectorXd delta = traj.xf - traj.x0;
  TrajectorySample out;
  out.x = traj.x0 + p * delta;
  out.xd = dp * delta;
  out.xdd = ddp * delta;
  if (t < 0.0 || t > T) {  // clamped endpoints are rest points
    out.xd.setZero();
    out.xdd.setZero();
  }
  return out;
}

PDGains uniform_gains(int dim, double kp, double kd) {
  PDGains g;
  g.kp = Eigen::VectorXd::Constant(dim, kp);
  g.kd = Eigen::VectorXd::Constant(dim, kd);
  return g;
}

Eigen::VectorXd pd_task_acc(const Eigen::VectorXd& x, const Eigen::VectorXd& xd,
                            const TrajectorySample& ref, const PDGains& gains) {
  if (x.size() != ref.x.size() || xd.size() != ref.xd.size())
    throw DimensionError("pd_task_acc: dimension mismatch");
  return ref.xdd + gains.kd.cwiseProduct(ref.xd - xd) + gains.kp.cwiseProduct(ref.x - x);
}

TaskLevel frame_motion_level(const RobotModel& model, const RobotState& state, int frame,
                             const Eigen::VectorXd& xdd_star, int priority) {
  TaskLevel lv;
  lv.A = frame_jacobian(model, state, frame);
  if (xdd_star.size() != lv.A.rows())
    throw DimensionError("frame_motion_level: xdd* size mismatch");
  lv.target = xdd_star - frame_drift(model, state, frame);
  lv.priority = priority;
  lv.kind = TaskKind::Motion;
  lv.label = "frame:" + model.frame(frame).name;
  return lv;
}

TaskLevel com_motion_level(const RobotModel& model, const RobotState& state,
                           const Eigen::VectorXd& xdd_star, int priority) {
  const int rows = model.base_dim() == 3 ? 1 : 2;  // ground projection
  TaskLevel lv;
  lv.A = com_jacobian(model, state).topRows(rows);
  if (xdd_star.size() != rows)
    throw DimensionError("com_motion_level: xdd* must have the horizontal dimension");
  lv.target = xdd_star - com_drift(model, state).head(rows);
  lv.priority = priority;
  lv.kind = TaskKind::Motion;
  lv.label = "com";
  return lv;
}

TaskLevel posture_level(const RobotModel& model, const Eigen::VectorXd& qdd_star, int priority) {
  const int n = model.joint_count();
  if (qdd_star.size() != n) throw DimensionError("posture_level: qdd* must have n entries");
  TaskLevel lv;
  lv.A = Eigen::MatrixXd::Zero(n, model.nv());
  lv.A.rightCols(n).setIdentity();
  lv.target = qdd_star;
  lv.priority = priority;
  lv.kind = TaskKind::Motion;
  lv.label = "posture";
  return lv;
}

TaskLevel force_level(const ConstraintSet& cs, const std::vector<int>& components,
                      const Eigen::VectorXd& f_des, int priority) {
  if (static_cast<int>(components.size()) != f_des.size())
    throw DimensionError("force_level: selection/target size mismatch");
  TaskLevel lv;
  lv.A = Eigen::MatrixXd::Zero(components.size(), cs.kf());
  for (size_t i = 0; i < components.size(); ++i) {
    if (components[i] < 0 || components[i] >= cs.kf())
      throw IndexOutOfRange("force_level: component index out of range");
    lv.A(static_cast<Eigen::Index>(i), components[i]) = 1.0;
  }
  lv.target = f_des;
  lv.priority = priority;
  lv.kind = TaskKind::Force;
  lv.label = "force";
  return lv;
}

}  // namespace wbc
