#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wbc/constraints.hpp"
#include "wbc/dynamics.hpp"
#include "wbc/lexls.hpp"
#include "wbc/model.hpp"

namespace wbc {

/// Quintic point-to-point reference with zero boundary velocity/acceleration.
struct Trajectory {
  Eigen::VectorXd x0, xf;
  double duration = 0.0;
};

struct TrajectorySample {
  Eigen::VectorXd x, xd, xdd;
};

/// 10-15-6 minimum-jerk polynomial; t clamps to [0, duration]. Throws
/// InvalidDuration for duration <= 0.
TrajectorySample min_jerk(const Trajectory& traj, double t);

struct PDGains {
  Eigen::VectorXd kp;  // 1/s^2, diagonal entries
  Eigen::VectorXd kd;  // 1/s
};

PDGains uniform_gains(int dim, double kp = 10.0, double kd = 5.0);

/// xdd* = xdd_r + Kd (xd_r - xd) + Kp (x_r - x)
Eigen::VectorXd pd_task_acc(const Eigen::VectorXd& x, const Eigen::VectorXd& xd,
                            const TrajectorySample& ref, const PDGains& gains);

/// Operational-point motion level: A = task Jacobian, target = xdd* - Jdot qd.
TaskLevel frame_motion_level(const RobotModel& model, const RobotState& state, int frame,
                             const Eigen::VectorXd& xdd_star, int priority);

/// Ground-projection COM level (horizontal axes only: 1 row planar, 2 spatial).
TaskLevel com_motion_level(const RobotModel& model, const RobotState& state,
                           const Eigen::VectorXd& xdd_star, int priority);

/// Joint-coordinate posture level: selector rows over the actuated joints
/// (zero base columns), target = qdd* for the joints.
TaskLevel posture_level(const RobotModel& model, const Eigen::VectorXd& qdd_star, int priority);

/// Selector-row force level over f_f: rows pick `components` of the
/// controlled-force vector. Throws IndexOutOfRange.
TaskLevel force_level(const ConstraintSet& cs, const std::vector<int>& components,
                      const Eigen::VectorXd& f_des, int priority);

}  // namespace wbc
