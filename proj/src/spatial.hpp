#pragma once

// Internal 6D spatial-vector helpers for the dynamics passes. Motion vectors
// are [omega; v], forces [n; f], all in body coordinates about the body
// origin. Not part of the public API.

#include <Eigen/Dense>
#include <vector>

#include "wbc/model.hpp"

namespace wbc::internal {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d S;
  S << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return S;
}

// motion cross product: crm(v) u
inline Vec6 cross_motion(const Vec6& v, const Vec6& u) {
  Vec6 r;
  r.head<3>() = v.head<3>().cross(u.head<3>());
  r.tail<3>() = v.tail<3>().cross(u.head<3>()) + v.head<3>().cross(u.tail<3>());
  return r;
}

// force cross product: crf(v) f = -crm(v)^T f
inline Vec6 cross_force(const Vec6& v, const Vec6& f) {
  Vec6 r;
  r.head<3>() = v.head<3>().cross(f.head<3>()) + v.tail<3>().cross(f.tail<3>());
  r.tail<3>() = v.head<3>().cross(f.tail<3>());
  return r;
}

// Relative pose of a child frame: E = child axes in parent coords, p = child
// origin in parent coords.
struct RelPose {
  Eigen::Matrix3d E;
  Eigen::Vector3d p;
};

// motion vector parent coords -> child coords
inline Vec6 motion_to_child(const RelPose& X, const Vec6& v) {
  Vec6 r;
  r.head<3>() = X.E.transpose() * v.head<3>();
  r.tail<3>() = X.E.transpose() * (v.tail<3>() + v.head<3>().cross(X.p));
  return r;
}

// force vector child coords -> parent coords
inline Vec6 force_to_parent(const RelPose& X, const Vec6& f) {
  Vec6 r;
  r.tail<3>() = X.E * f.tail<3>();
  r.head<3>() = X.E * f.head<3>() + X.p.cross(r.tail<3>());
  return r;
}

// 6x6 motion transform parent -> child (for composite-inertia math)
inline Mat6 motion_matrix_to_child(const RelPose& X) {
  Mat6 M = Mat6::Zero();
  Eigen::Matrix3d Et = X.E.transpose();
  M.topLeftCorner<3, 3>() = Et;
  M.bottomRightCorner<3, 3>() = Et;
  M.bottomLeftCorner<3, 3>() = -Et * skew(X.p);
  return M;
}

// spatial inertia about the body origin from mass, COM offset and I about COM
inline Mat6 spatial_inertia(const RobotModel::Link& link) {
  Mat6 I = Mat6::Zero();
  Eigen::Matrix3d C = skew(link.com);
  I.topLeftCorner<3, 3>() = link.inertia + link.mass * C * C.transpose();
  I.topRightCorner<3, 3>() = link.mass * C;
  I.bottomLeftCorner<3, 3>() = link.mass * C.transpose();
  I.bottomRightCorner<3, 3>() = link.mass * Eigen::Matrix3d::Identity();
  return I;
}

// Base joint motion subspace (6 x base_dim). Planar coordinates (vx, vy, w),
// spatial (vx, vy, vz, wx, wy, wz), both body-frame.
inline Eigen::Matrix<double, 6, Eigen::Dynamic> base_subspace(int base_dim) {
  Eigen::Matrix<double, 6, Eigen::Dynamic> Phi(6, base_dim);
  Phi.setZero();
  if (base_dim == 3) {
    Phi(3, 0) = 1.0;  // vx
    Phi(4, 1) = 1.0;  // vy
    Phi(2, 2) = 1.0;  // omega_z
  } else {
    Phi.block<3, 3>(3, 0).setIdentity();  // v
    Phi.block<3, 3>(0, 3).setIdentity();  // omega
  }
  return Phi;
}

inline Vec6 joint_subspace(const RobotModel::Joint& j) {
  Vec6 s = Vec6::Zero();
  if (j.type == JointType::Revolute)
    s.head<3>() = j.axis;
  else
    s.tail<3>() = j.axis;
  return s;
}

// Forward-kinematics cache: world poses and parent-relative poses per link.
struct KinCache {
  std::vector<Eigen::Matrix3d> R_world;
  std::vector<Eigen::Vector3d> p_world;
  std::vector<RelPose> X_parent;  // X_parent[i] valid for i >= 1
};

KinCache forward_kinematics(const RobotModel& model, const Eigen::VectorXd& q);

// Spatial velocity of every link in its own coordinates.
std::vector<Vec6> link_velocities(const RobotModel& model, const KinCache& kc,
                                  const Eigen::VectorXd& qd);

}  // namespace wbc::internal
