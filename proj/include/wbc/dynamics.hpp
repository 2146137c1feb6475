#pragma once

#include <Eigen/Dense>
#include <map>

#include "wbc/model.hpp"

namespace wbc {

/// Per-frame external wrenches, world-aligned at the frame origin.
/// Planar rows: (fx, fy, mz); spatial rows: (fx, fy, fz, mx, my, mz).
using ExternalForces = std::map<int, Eigen::VectorXd>;

/// Joint-space mass matrix, nv x nv, composite-rigid-body construction.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const RobotState& state);

/// Gravity, centrifugal and Coriolis terms: inverse_dynamics at qdd = 0 with
/// no external forces.
Eigen::VectorXd bias_forces(const RobotModel& model, const RobotState& state);

/// Recursive Newton-Euler: returns M qdd + h - sum_f J_f^T w_f without forming
/// M. Base rows first.
Eigen::VectorXd inverse_dynamics(const RobotModel& model, const RobotState& state,
                                 const Eigen::VectorXd& qdd,
                                 const ExternalForces& external = {});

/// Constrained-free forward dynamics: qdd = M^{-1} (S^T tau + sum J^T w - h).
/// tau has joint_count() entries.
Eigen::VectorXd forward_dynamics(const RobotModel& model, const RobotState& state,
                                 const Eigen::VectorXd& tau,
                                 const ExternalForces& external = {});

struct FramePose {
  Eigen::Matrix3d R;
  Eigen::Vector3d p;
};

FramePose frame_pose(const RobotModel& model, const RobotState& state, int frame);

/// World-aligned frame Jacobian at the frame origin, frame_dof() x nv.
/// Planar rows (vx, vy, omega); spatial rows (vx, vy, vz, wx, wy, wz).
Eigen::MatrixXd frame_jacobian(const RobotModel& model, const RobotState& state, int frame);

/// Drift term Jdot * qd in the same row convention (so that the frame's
/// conventional acceleration is J qdd + drift).
Eigen::VectorXd frame_drift(const RobotModel& model, const RobotState& state, int frame);

Eigen::VectorXd frame_velocity(const RobotModel& model, const RobotState& state, int frame);

/// Center of mass and its horizontal-plane quantities. Positions/velocities
/// have 2 entries in the planar variant, 3 in the spatial one.
Eigen::VectorXd com_position(const RobotModel& model, const RobotState& state);
Eigen::MatrixXd com_jacobian(const RobotModel& model, const RobotState& state);
Eigen::VectorXd com_velocity(const RobotModel& model, const RobotState& state);
Eigen::VectorXd com_drift(const RobotModel& model, const RobotState& state);

}  // namespace wbc
