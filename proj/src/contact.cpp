#include "wbc/contact.hpp"

namespace wbc {

std::vector<PointForce> contact_forces(const RobotModel& model, const RobotState& state,
                                       const ContactModel& contact) {
  if (model.base_dim() != 3)
    throw DimensionError("contact_forces: the penalty simulator is planar (base_dim 3)");
  std::vector<PointForce> out;
  out.reserve(contact.points.size());
  for (size_t i = 0; i < contact.points.size(); ++i) {
    const auto& cp = contact.points[i];
    const auto& surf = contact.surfaces.at(cp.surface);
    FramePose pose = frame_pose(model, state, cp.frame);
    Eigen::VectorXd vel = frame_velocity(model, state, cp.frame);

    PointForce pf;
    pf.point = static_cast<int>(i);
    pf.position = pose.p.head<2>();
    pf.gap = (pf.position - surf.point).dot(surf.normal);
    if (pf.gap < 0.0) {
      Eigen::Vector2d v = vel.head<2>();
      double gap_rate = v.dot(surf.normal);
      double fn = std::max(0.0, -contact.params.stiffness * pf.gap -
                                    contact.params.damping * gap_rate);
      pf.force = fn * surf.normal;
      if (fn > 0.0) {
        Eigen::Vector2d tangent(-surf.normal.y(), surf.normal.x());
        pf.force += -contact.params.tangential_damping * v.dot(tangent) * tangent;
      }
    }
    out.push_back(pf);
  }
  return out;
}

ExternalForces to_external_forces(const std::vector<PointForce>& forces,
                                  const ContactModel& contact) {
  ExternalForces ext;
  for (const auto& pf : forces) {
    if (pf.force.isZero()) continue;
    const int frame = contact.points[pf.point].frame;
    auto [it, inserted] = ext.try_emplace(frame, Eigen::Vector3d::Zero());
    it->second.head<2>() += pf.force;
  }
  return ext;
}

Eigen::Vector3d wrench_at_frame(const RobotModel& model, const RobotState& state,
                                const std::vector<PointForce>& forces,
                                const ContactModel& contact, int frame) {
  FramePose pose = frame_pose(model, state, frame);
  const int link = model.frame(frame).link;
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  for (const auto& pf : forces) {
    if (model.frame(contact.points[pf.point].frame).link != link) continue;
    w.head<2>() += pf.force;
    Eigen::Vector2d r = pf.position - pose.p.head<2>();
    w(2) += r.x() * pf.force.y() - r.y() * pf.force.x();
  }
  return w;
}

bool center_of_pressure(const RobotModel& model, const RobotState& state,
                        const std::vector<PointForce>& forces, const ContactModel& contact,
                        int frame, double& cop_x) {
  Eigen::Vector3d w = wrench_at_frame(model, state, forces, contact, frame);
  if (std::abs(w.y()) < 1e-6) return false;
  cop_x = -w.z() / w.y();  // offset along the foot from the frame origin
  return true;
}

}  // namespace wbc
