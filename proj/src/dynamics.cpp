#include "wbc/dynamics.hpp"

#include <Eigen/Cholesky>

#include "spatial.hpp"

namespace wbc {

using internal::KinCache;
using internal::Mat6;
using internal::RelPose;
using internal::Vec6;

namespace internal {

KinCache forward_kinematics(const RobotModel& model, const Eigen::VectorXd& q) {
  const int nl = model.link_count();
  KinCache kc;
  kc.R_world.resize(nl);
  kc.p_world.resize(nl);
  kc.X_parent.resize(nl);

  if (model.base_dim() == 3) {
    kc.R_world[0] = Eigen::AngleAxisd(q(2), Eigen::Vector3d::UnitZ()).toRotationMatrix();
    kc.p_world[0] = Eigen::Vector3d(q(0), q(1), 0.0);
  } else {
    Eigen::Quaterniond quat(q(3), q(4), q(5), q(6));
    kc.R_world[0] = quat.toRotationMatrix();
    kc.p_world[0] = q.head<3>();
  }

  const int qoff = model.base_dim() == 3 ? 3 : 7;
  for (int j = 0; j < model.joint_count(); ++j) {
    const auto& joint = model.joint(j);
    const double qi = q(qoff + j);
    RelPose X;
    if (joint.type == JointType::Revolute) {
      X.E = joint.R_origin * Eigen::AngleAxisd(qi, joint.axis).toRotationMatrix();
      X.p = joint.p_origin;
    } else {
      X.E = joint.R_origin;
      X.p = joint.p_origin + joint.R_origin * (joint.axis * qi);
    }
    const int child = joint.child;
    kc.X_parent[child] = X;
    kc.R_world[child] = kc.R_world[joint.parent] * X.E;
    kc.p_world[child] = kc.p_world[joint.parent] + kc.R_world[joint.parent] * X.p;
  }
  return kc;
}

std::vector<Vec6> link_velocities(const RobotModel& model, const KinCache& kc,
                                  const Eigen::VectorXd& qd) {
  const int nl = model.link_count();
  std::vector<Vec6> v(nl);
  v[0] = internal::base_subspace(model.base_dim()) * qd.head(model.base_dim());
  for (int j = 0; j < model.joint_count(); ++j) {
    const auto& joint = model.joint(j);
    const int child = joint.child;
    v[child] = motion_to_child(kc.X_parent[child], v[joint.parent]) +
               joint_subspace(joint) * qd(model.base_dim() + j);
  }
  return v;
}

}  // namespace internal

namespace {

// External wrench (world-aligned at frame origin) -> spatial force on the
// link, link coordinates about the link origin.
Vec6 wrench_to_link(const RobotModel& model, const KinCache& kc, int frame_id,
                    const Eigen::VectorXd& w) {
  const auto& fr = model.frame(frame_id);
  Eigen::Vector3d f_w, m_w;
  if (model.base_dim() == 3) {
    if (w.size() != 3) throw DimensionError("planar wrench must have 3 entries");
    f_w = Eigen::Vector3d(w(0), w(1), 0.0);
    m_w = Eigen::Vector3d(0.0, 0.0, w(2));
  } else {
    if (w.size() != 6) throw DimensionError("spatial wrench must have 6 entries");
    f_w = w.head<3>();
    m_w = w.tail<3>();
  }
  const Eigen::Matrix3d& R = kc.R_world[fr.link];
  Eigen::Vector3d p_frame_w = kc.p_world[fr.link] + R * fr.p;
  Eigen::Vector3d m_about_link = m_w + (p_frame_w - kc.p_world[fr.link]).cross(f_w);
  Vec6 f;
  f.head<3>() = R.transpose() * m_about_link;
  f.tail<3>() = R.transpose() * f_w;
  return f;
}

Eigen::VectorXd rnea(const RobotModel& model, const RobotState& state,
                     const Eigen::VectorXd& qdd, const ExternalForces& external,
                     bool with_gravity) {
  check_state(model, state);
  if (qdd.size() != model.nv()) throw DimensionError("inverse_dynamics: qdd size mismatch");
  const int nl = model.link_count();
  const int b = model.base_dim();

  KinCache kc = internal::forward_kinematics(model, state.q);
  auto Phi_b = internal::base_subspace(b);

  std::vector<Vec6> v(nl), a(nl), f(nl);
  v[0] = Phi_b * state.qd.head(b);
  a[0] = Phi_b * qdd.head(b);
  if (with_gravity) a[0].tail<3>() -= kc.R_world[0].transpose() * model.gravity();

  for (int j = 0; j < model.joint_count(); ++j) {
    const auto& joint = model.joint(j);
    const int child = joint.child;
    const Vec6 s = internal::joint_subspace(joint);
    const Vec6 vj = s * state.qd(b + j);
    v[child] = motion_to_child(kc.X_parent[child], v[joint.parent]) + vj;
    a[child] = motion_to_child(kc.X_parent[child], a[joint.parent]) + s * qdd(b + j) +
               internal::cross_motion(v[child], vj);
  }

  std::vector<Mat6> I(nl);
  for (int i = 0; i < nl; ++i) I[i] = internal::spatial_inertia(model.link(i));
  for (int i = 0; i < nl; ++i)
    f[i] = I[i] * a[i] + internal::cross_force(v[i], I[i] * v[i]);
  for (const auto& [frame_id, w] : external) {
    if (frame_id < 0 || frame_id >= model.frame_count())
      throw UnknownFrame("inverse_dynamics: unknown frame id");
    f[model.frame(frame_id).link] -= wrench_to_link(model, kc, frame_id, w);
  }

  Eigen::VectorXd out(model.nv());
  for (int j = model.joint_count() - 1; j >= 0; --j) {
    const auto& joint = model.joint(j);
    const int child = joint.child;
    out(b + j) = internal::joint_subspace(joint).dot(f[child]);
    f[joint.parent] += force_to_parent(kc.X_parent[child], f[child]);
  }
  out.head(b) = Phi_b.transpose() * f[0];
  return out;
}

}  // namespace

Eigen::VectorXd inverse_dynamics(const RobotModel& model, const RobotState& state,
                                 const Eigen::VectorXd& qdd, const ExternalForces& external) {
  return rnea(model, state, qdd, external, true);
}

Eigen::VectorXd bias_forces(const RobotModel& model, const RobotState& state) {
  return rnea(model, state, Eigen::VectorXd::Zero(model.nv()), {}, true);
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  const int nl = model.link_count();
  const int b = model.base_dim();
  KinCache kc = internal::forward_kinematics(model, state.q);

  std::vector<Mat6> IC(nl);
  std::vector<Mat6> X(nl);  // motion transform parent -> child
  for (int i = 0; i < nl; ++i) IC[i] = internal::spatial_inertia(model.link(i));
  for (int j = 0; j < model.joint_count(); ++j)
    X[j + 1] = internal::motion_matrix_to_child(kc.X_parent[j + 1]);
  for (int j = model.joint_count() - 1; j >= 0; --j) {
    const auto& joint = model.joint(j);
    IC[joint.parent] += X[joint.child].transpose() * IC[joint.child] * X[joint.child];
  }

  auto Phi_b = internal::base_subspace(b);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(model.nv(), model.nv());
  M.topLeftCorner(b, b) = Phi_b.transpose() * IC[0] * Phi_b;

  for (int j = 0; j < model.joint_count(); ++j) {
    const auto& joint = model.joint(j);
    const Vec6 s = internal::joint_subspace(joint);
    Vec6 F = IC[joint.child] * s;
    M(b + j, b + j) = s.dot(F);
    int link = joint.child;
    while (link != 0) {
      F = X[link].transpose() * F;
      link = model.joint(link - 1).parent;
      if (link != 0) {
        const int pj = link - 1;  // joint whose child is `link`
        const double mij = internal::joint_subspace(model.joint(pj)).dot(F);
        M(b + j, b + pj) = mij;
        M(b + pj, b + j) = mij;
      }
    }
    M.block(b + j, 0, 1, b) = (Phi_b.transpose() * F).transpose();
    M.block(0, b + j, b, 1) = Phi_b.transpose() * F;
  }
  return M;
}

Eigen::VectorXd forward_dynamics(const RobotModel& model, const RobotState& state,
                                 const Eigen::VectorXd& tau, const ExternalForces& external) {
  if (tau.size() != model.joint_count())
    throw DimensionError("forward_dynamics: tau size mismatch");
  Eigen::VectorXd rhs = -rnea(model, state, Eigen::VectorXd::Zero(model.nv()), external, true);
  rhs.tail(model.joint_count()) += tau;
  return mass_matrix(model, state).llt().solve(rhs);
}

FramePose frame_pose(const RobotModel& model, const RobotState& state, int frame) {
  if (frame < 0 || frame >= model.frame_count()) throw UnknownFrame("frame_pose: bad id");
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  const auto& fr = model.frame(frame);
  return {kc.R_world[fr.link] * fr.R, kc.p_world[fr.link] + kc.R_world[fr.link] * fr.p};
}

namespace {

// World-aligned point Jacobian rows (3 linear + 3 angular) for a point
// attached to `link`.
void point_jacobian6(const RobotModel& model, const KinCache& kc, int link,
                     const Eigen::Vector3d& point_w, Eigen::MatrixXd& lin,
                     Eigen::MatrixXd& ang) {
  const int b = model.base_dim();
  lin.setZero(3, model.nv());
  ang.setZero(3, model.nv());

  // base columns
  const Eigen::Matrix3d& R0 = kc.R_world[0];
  Eigen::Vector3d r0 = point_w - kc.p_world[0];
  if (b == 3) {
    lin.col(0).head<3>() = R0.col(0);
    lin.col(1).head<3>() = R0.col(1);
    lin.col(2).head<3>() = Eigen::Vector3d::UnitZ().cross(r0);
    ang.col(2).head<3>() = Eigen::Vector3d::UnitZ();
  } else {
    for (int i = 0; i < 3; ++i) lin.col(i).head<3>() = R0.col(i);
    for (int i = 0; i < 3; ++i) {
      ang.col(3 + i).head<3>() = R0.col(i);
      lin.col(3 + i).head<3>() = R0.col(i).cross(r0);
    }
  }

  // joint columns along the path to the base
  int l = link;
  while (l != 0) {
    const int j = l - 1;
    const auto& joint = model.joint(j);
    Eigen::Vector3d axis_w = kc.R_world[l] * joint.axis;
    if (joint.type == JointType::Revolute) {
      ang.col(b + j).head<3>() = axis_w;
      lin.col(b + j).head<3>() = axis_w.cross(point_w - kc.p_world[l]);
    } else {
      lin.col(b + j).head<3>() = axis_w;
    }
    l = joint.parent;
  }
}

}  // namespace

Eigen::MatrixXd frame_jacobian(const RobotModel& model, const RobotState& state, int frame) {
  if (frame < 0 || frame >= model.frame_count()) throw UnknownFrame("frame_jacobian: bad id");
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  const auto& fr = model.frame(frame);
  Eigen::Vector3d p_w = kc.p_world[fr.link] + kc.R_world[fr.link] * fr.p;
  Eigen::MatrixXd lin, ang;
  point_jacobian6(model, kc, fr.link, p_w, lin, ang);
  if (model.base_dim() == 3) {
    Eigen::MatrixXd J(3, model.nv());
    J.row(0) = lin.row(0);
    J.row(1) = lin.row(1);
    J.row(2) = ang.row(2);
    return J;
  }
  Eigen::MatrixXd J(6, model.nv());
  J.topRows(3) = lin;
  J.bottomRows(3) = ang;
  return J;
}

namespace {

// Conventional acceleration (world, linear and angular) of a point rigidly
// attached to a link, with qdd = 0 and gravity off: the Jdot*qd drift.
struct PointAcc {
  Eigen::Vector3d lin;
  Eigen::Vector3d ang;
};

std::vector<Vec6> drift_accelerations(const RobotModel& model, const KinCache& kc,
                                      const std::vector<Vec6>& v) {
  const int nl = model.link_count();
  std::vector<Vec6> a(nl);
  a[0].setZero();
  for (int j = 0; j < model.joint_count(); ++j) {
    const auto& joint = model.joint(j);
    const int child = joint.child;
    // qd is baked into v; recover the joint's local velocity contribution
    const Vec6 vj = v[child] - motion_to_child(kc.X_parent[child], v[joint.parent]);
    a[child] =
        motion_to_child(kc.X_parent[child], a[joint.parent]) + internal::cross_motion(v[child], vj);
  }
  return a;
}

PointAcc point_drift(const RobotModel& model, const KinCache& kc, const std::vector<Vec6>& v,
                     const std::vector<Vec6>& a, int link, const Eigen::Vector3d& p_local) {
  const Eigen::Matrix3d& R = kc.R_world[link];
  Eigen::Vector3d w = v[link].head<3>(), vl = v[link].tail<3>();
  Eigen::Vector3d alpha = a[link].head<3>(), al = a[link].tail<3>();
  Eigen::Vector3d v_pt = vl + w.cross(p_local);
  Eigen::Vector3d a_spatial = al + alpha.cross(p_local);
  PointAcc out;
  out.lin = R * (a_spatial + w.cross(v_pt));
  out.ang = R * alpha;
  return out;
}

}  // namespace

Eigen::VectorXd frame_drift(const RobotModel& model, const RobotState& state, int frame) {
  if (frame < 0 || frame >= model.frame_count()) throw UnknownFrame("frame_drift: bad id");
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  auto v = internal::link_velocities(model, kc, state.qd);
  auto a = drift_accelerations(model, kc, v);
  const auto& fr = model.frame(frame);
  PointAcc pa = point_drift(model, kc, v, a, fr.link, fr.p);
  if (model.base_dim() == 3) return Eigen::Vector3d(pa.lin.x(), pa.lin.y(), pa.ang.z());
  Eigen::VectorXd out(6);
  out << pa.lin, pa.ang;
  return out;
}

Eigen::VectorXd frame_velocity(const RobotModel& model, const RobotState& state, int frame) {
  if (frame < 0 || frame >= model.frame_count()) throw UnknownFrame("frame_velocity: bad id");
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  auto v = internal::link_velocities(model, kc, state.qd);
  const auto& fr = model.frame(frame);
  const Eigen::Matrix3d& R = kc.R_world[fr.link];
  Eigen::Vector3d w_w = R * v[fr.link].head<3>();
  Eigen::Vector3d v_w = R * (v[fr.link].tail<3>() + v[fr.link].head<3>().cross(fr.p));
  if (model.base_dim() == 3) return Eigen::Vector3d(v_w.x(), v_w.y(), w_w.z());
  Eigen::VectorXd out(6);
  out << v_w, w_w;
  return out;
}

Eigen::VectorXd com_position(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int i = 0; i < model.link_count(); ++i) {
    const auto& l = model.link(i);
    c += l.mass * (kc.p_world[i] + kc.R_world[i] * l.com);
  }
  c /= model.total_mass();
  return model.base_dim() == 3 ? Eigen::VectorXd(c.head<2>()) : Eigen::VectorXd(c);
}

Eigen::MatrixXd com_jacobian(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  const int rows = model.base_dim() == 3 ? 2 : 3;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, model.nv());
  Eigen::MatrixXd lin, ang;
  for (int i = 0; i < model.link_count(); ++i) {
    const auto& l = model.link(i);
    Eigen::Vector3d com_w = kc.p_world[i] + kc.R_world[i] * l.com;
    point_jacobian6(model, kc, i, com_w, lin, ang);
    J += l.mass * lin;
  }
  J /= model.total_mass();
  return J.topRows(rows);
}

Eigen::VectorXd com_velocity(const RobotModel& model, const RobotState& state) {
  return com_jacobian(model, state) * state.qd;
}

Eigen::VectorXd com_drift(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  KinCache kc = internal::forward_kinematics(model, state.q);
  auto v = internal::link_velocities(model, kc, state.qd);
  auto a = drift_accelerations(model, kc, v);
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  for (int i = 0; i < model.link_count(); ++i) {
    const auto& l = model.link(i);
    d += l.mass * point_drift(model, kc, v, a, i, l.com).lin;
  }
  d /= model.total_mass();
  return model.base_dim() == 3 ? Eigen::VectorXd(d.head<2>()) : Eigen::VectorXd(d);
}

}  // namespace wbc
