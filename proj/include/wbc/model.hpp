#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <map>
#include <string>
#include <vector>

#include "wbc/errors.hpp"

namespace wbc {

enum class JointType { Revolute, Prismatic };

/// Floating-base kinematic tree. Link 0 is the base; every other link is the
/// child of exactly one joint whose parent comes earlier in the link order.
/// base_dim = 3 selects the planar variant (x-y plane, rotation about z,
/// velocity coordinates (vx, vy, omega) in the base frame); base_dim = 6 the
/// spatial one (velocity (vx, vy, vz, wx, wy, wz), body frame).
///
/// Generalized velocities have nv() = base_dim + joint count entries, base
/// coordinates first. Configurations have nq() entries: planar base pose is
/// (x, y, theta), spatial is (x, y, z) + unit quaternion (w, x, y, z).
class RobotModel {
 public:
  struct Link {
    std::string name;
    double mass = 0.0;
    Eigen::Vector3d com = Eigen::Vector3d::Zero();       // in link frame
    Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();   // about the COM, link frame
  };
  struct Joint {
    std::string name;
    JointType type = JointType::Revolute;
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();     // in child link frame
    Eigen::Matrix3d R_origin = Eigen::Matrix3d::Identity();  // child frame in parent at q=0
    Eigen::Vector3d p_origin = Eigen::Vector3d::Zero();
    int parent = 0;  // parent link index
    int child = 0;   // child link index (= joint index + 1)
  };
  struct Frame {
    std::string name;
    int link = 0;
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();  // frame in link coords
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
  };

  RobotModel(int base_dim, Link base, Eigen::Vector3d gravity);

  /// Appends a link connected by `joint` to an existing link. Returns the new
  /// link index.
  int add_link(Link link, Joint joint);
  /// Attaches a named frame to a link. Returns the frame id.
  int add_frame(Frame frame);

  static RobotModel from_json(const std::string& text);
  static RobotModel load_file(const std::string& path);

  int base_dim() const { return base_dim_; }
  int joint_count() const { return static_cast<int>(joints_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  int frame_count() const { return static_cast<int>(frames_.size()); }
  int nv() const { return base_dim_ + joint_count(); }
  int nq() const { return (base_dim_ == 3 ? 3 : 7) + joint_count(); }
  /// Rows of a full frame Jacobian / length of a frame wrench (3 planar, 6 spatial).
  int frame_dof() const { return base_dim_; }

  const Eigen::Vector3d& gravity() const { return gravity_; }
  void set_gravity(const Eigen::Vector3d& g) { gravity_ = g; }

  const Link& link(int i) const { return links_.at(i); }
  const Joint& joint(int i) const { return joints_.at(i); }
  const Frame& frame(int i) const { return frames_.at(i); }
  int frame_id(const std::string& name) const;
  int link_id(const std::string& name) const;
  double total_mass() const;

  /// Validates masses, inertia SPD-ness and tree topology; throws ParseError.
  void validate() const;

 private:
  int base_dim_;
  Eigen::Vector3d gravity_;
  std::vector<Link> links_;
  std::vector<Joint> joints_;  // joint i connects links_[joints_[i].parent] -> links_[i+1]
  std::vector<Frame> frames_;
  std::map<std::string, int> frame_ids_;
  std::map<std::string, int> link_ids_;
};

struct RobotState {
  Eigen::VectorXd q;   // nq()
  Eigen::VectorXd qd;  // nv()
};

/// Neutral configuration: base at the world origin, zero joint angles, zero velocity.
RobotState neutral_state(const RobotModel& model);

/// Throws on wrong sizes, non-finite entries or a denormalized base orientation.
void check_state(const RobotModel& model, const RobotState& state);

/// Configuration integration q <- q (+) v*dt (joint angles add; the base pose
/// integrates in its Lie group, quaternion renormalized).
Eigen::VectorXd integrate_configuration(const RobotModel& model, const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& v, double dt);

}  // namespace wbc
