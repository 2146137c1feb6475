#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wbc/dynamics.hpp"
#include "wbc/model.hpp"

namespace wbc {

/// Planar half-space environment surface: points with (p - point) . normal > 0
/// are outside (no contact); the normal points away from the surface material.
struct ContactSurface {
  std::string name;
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  Eigen::Vector2d normal = Eigen::Vector2d::UnitY();
};

struct ContactPoint {
  int frame = -1;    // robot frame
  int surface = -1;  // index into ContactModel::surfaces
};

struct ContactParams {
  double stiffness = 2e5;            // N/m
  double damping = 1e3;              // Ns/m
  double tangential_damping = 1e3;   // Ns/m (viscous, no stiction)
};

struct ContactModel {
  ContactParams params;
  std::vector<ContactSurface> surfaces;
  std::vector<ContactPoint> points;
};

/// One evaluated contact point: world position/force and the signed gap
/// (negative when penetrating).
struct PointForce {
  int point = -1;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d force = Eigen::Vector2d::Zero();  // on the robot, world frame
  double gap = 0.0;
};

/// Spring-damper law: normal force = max(0, -k*gap - d*gap_rate) while
/// penetrating, viscous tangential force while the normal force is positive,
/// zero wrench when separated. Planar models only.
std::vector<PointForce> contact_forces(const RobotModel& model, const RobotState& state,
                                       const ContactModel& contact);

/// Per-frame wrench map consumable by forward_dynamics (point forces enter as
/// (fx, fy, 0) wrenches at their frames).
ExternalForces to_external_forces(const std::vector<PointForce>& forces,
                                  const ContactModel& contact);

/// Aggregated wrench reading (fx, fy, mz) at `frame` from every contact point
/// attached to the same link, world-aligned at the frame origin. This is the
/// measurement fed back as f_hat.
Eigen::Vector3d wrench_at_frame(const RobotModel& model, const RobotState& state,
                                const std::vector<PointForce>& forces,
                                const ContactModel& contact, int frame);

/// Center of pressure along a foot segment (planar ZMP analog): the point on
/// the line between the two contact points where the tangential moment of the
/// aggregate wrench vanishes. Returns false when the normal load is ~zero.
bool center_of_pressure(const RobotModel& model, const RobotState& state,
                        const std::vector<PointForce>& forces, const ContactModel& contact,
                        int frame, double& cop_x);

}  // namespace wbc
