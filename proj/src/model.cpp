#include "wbc/model.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace wbc {

using nlohmann::json;

RobotModel::RobotModel(int base_dim, Link base, Eigen::Vector3d gravity)
    : base_dim_(base_dim), gravity_(std::move(gravity)) {
  if (base_dim != 3 && base_dim != 6)
    throw ParseError("RobotModel: base_dim must be 3 or 6");
  link_ids_[base.name] = 0;
  links_.push_back(std::move(base));
}

int RobotModel::add_link(Link link, Joint joint) {
  if (joint.parent < 0 || joint.parent >= link_count())
    throw ParseError("add_link: unknown parent link");
  if (link_ids_.count(link.name))
    throw ParseError("add_link: duplicate link name '" + link.name + "'");
  joint.child = link_count();
  link_ids_[link.name] = joint.child;
  links_.push_back(std::move(link));
  joints_.push_back(std::move(joint));
  return joint.child;
}

int RobotModel::add_frame(Frame frame) {
  if (frame.link < 0 || frame.link >= link_count())
    throw ParseError("add_frame: unknown link");
  if (frame_ids_.count(frame.name))
    throw ParseError("add_frame: duplicate frame name '" + frame.name + "'");
  int id = frame_count();
  frame_ids_[frame.name] = id;
  frames_.push_back(std::move(frame));
  return id;
}

int RobotModel::frame_id(const std::string& name) const {
  auto it = frame_ids_.find(name);
  if (it == frame_ids_.end()) throw UnknownFrame("unknown frame '" + name + "'");
  return it->second;
}

int RobotModel::link_id(const std::string& name) const {
  auto it = link_ids_.find(name);
  if (it == link_ids_.end()) throw ParseError("unknown link '" + name + "'");
  return it->second;
}

double RobotModel::total_mass() const {
  double m = 0.0;
  for (const auto& l : links_) m += l.mass;
  return m;
}

void RobotModel::validate() const {
  for (const auto& l : links_) {
    if (!(l.mass > 0.0)) throw ParseError("link '" + l.name + "': mass must be > 0");
    if ((l.inertia - l.inertia.transpose()).norm() > 1e-9 * (1.0 + l.inertia.norm()))
      throw ParseError("link '" + l.name + "': inertia not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(l.inertia);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw ParseError("link '" + l.name + "': inertia not positive-definite");
  }
  for (int j = 0; j < joint_count(); ++j) {
    const auto& jt = joints_[j];
    if (jt.parent >= jt.child)
      throw ParseError("joint '" + jt.name + "': parent must precede child");
    if (jt.axis.norm() < 1e-12) throw ParseError("joint '" + jt.name + "': zero axis");
  }
}

namespace {

Eigen::Vector3d read_vec3(const json& j, const std::string& key, Eigen::Vector3d fallback,
                          bool required = false) {
  if (!j.contains(key)) {
    if (required) throw ParseError("model: missing '" + key + "'");
    return fallback;
  }
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw ParseError("model: '" + key + "' must be [x,y,z]");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

Eigen::Matrix3d read_inertia(const json& j) {
  const auto& a = j.at("inertia");
  if (!a.is_array() || a.size() != 6)
    throw ParseError("model: 'inertia' must be [ixx,iyy,izz,ixy,ixz,iyz]");
  Eigen::Matrix3d I;
  double xx = a[0], yy = a[1], zz = a[2], xy = a[3], xz = a[4], yz = a[5];
  I << xx, xy, xz, xy, yy, yz, xz, yz, zz;
  return I;
}

Eigen::Matrix3d rpy_to_matrix(const Eigen::Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

RobotModel::Link read_link(const json& j) {
  RobotModel::Link l;
  l.name = j.at("name").get<std::string>();
  l.mass = j.at("mass").get<double>();
  l.com = read_vec3(j, "com", Eigen::Vector3d::Zero());
  l.inertia = read_inertia(j);
  return l;
}

}  // namespace

RobotModel RobotModel::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "wbc-model")
      throw ParseError("model: expected format 'wbc-model'");
    if (j.value("version", 0) != 1) throw ParseError("model: unsupported version");
    int base_dim = j.at("base_dim").get<int>();
    Eigen::Vector3d default_g =
        base_dim == 3 ? Eigen::Vector3d(0, -9.81, 0) : Eigen::Vector3d(0, 0, -9.81);
    Eigen::Vector3d gravity = read_vec3(j, "gravity", default_g);

    RobotModel model(base_dim, read_link(j.at("base")), gravity);
    for (const auto& lj : j.value("links", json::array())) {
      Link link = read_link(lj);
      const auto& jj = lj.at("joint");
      Joint joint;
      joint.name = jj.at("name").get<std::string>();
      std::string type = jj.at("type").get<std::string>();
      if (type == "revolute")
        joint.type = JointType::Revolute;
      else if (type == "prismatic")
        joint.type = JointType::Prismatic;
      else
        throw ParseError("model: unknown joint type '" + type + "'");
      joint.axis = read_vec3(jj, "axis", Eigen::Vector3d::UnitZ()).normalized();
      joint.p_origin = read_vec3(jj, "xyz", Eigen::Vector3d::Zero());
      joint.R_origin = rpy_to_matrix(read_vec3(jj, "rpy", Eigen::Vector3d::Zero()));
      joint.parent = model.link_id(jj.at("parent").get<std::string>());
      model.add_link(std::move(link), std::move(joint));
    }
    for (const auto& fj : j.value("frames", json::array())) {
      Frame f;
      f.name = fj.at("name").get<std::string>();
      f.link = model.link_id(fj.at("link").get<std::string>());
      f.p = read_vec3(fj, "xyz", Eigen::Vector3d::Zero());
      f.R = rpy_to_matrix(read_vec3(fj, "rpy", Eigen::Vector3d::Zero()));
      model.add_frame(std::move(f));
    }
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

RobotModel RobotModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

RobotState neutral_state(const RobotModel& model) {
  RobotState s;
  s.q = Eigen::VectorXd::Zero(model.nq());
  if (model.base_dim() == 6) s.q(3) = 1.0;  // identity quaternion (w,x,y,z)
  s.qd = Eigen::VectorXd::Zero(model.nv());
  return s;
}

void check_state(const RobotModel& model, const RobotState& state) {
  if (state.q.size() != model.nq() || state.qd.size() != model.nv())
    throw DimensionError("state size mismatch");
  if (!state.q.allFinite() || !state.qd.allFinite())
    throw InvalidMatrix("state has non-finite entries");
  if (model.base_dim() == 6) {
    double n = state.q.segment<4>(3).norm();
    if (std::abs(n - 1.0) > 1e-6) throw InvalidMatrix("base quaternion not normalized");
  }
}

Eigen::VectorXd integrate_configuration(const RobotModel& model, const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& v, double dt) {
  Eigen::VectorXd qn = q;
  if (model.base_dim() == 3) {
    double th = q(2);
    Eigen::Rotation2Dd R(th);
    qn.head<2>() += R * v.head<2>() * dt;  // body-frame linear velocity
    qn(2) += v(2) * dt;
    qn.tail(model.joint_count()) += v.tail(model.joint_count()) * dt;
  } else {
    Eigen::Quaterniond quat(q(3), q(4), q(5), q(6));
    qn.head<3>() += quat * v.head<3>() * dt;
    Eigen::Vector3d w = v.segment<3>(3) * dt;
    Eigen::Quaterniond dq = Eigen::Quaterniond::Identity();
    double angle = w.norm();
    if (angle > 1e-14) dq = Eigen::Quaterniond(Eigen::AngleAxisd(angle, w / angle));
    quat = (quat * dq).normalized();
    qn(3) = quat.w();
    qn(4) = quat.x();
    qn(5) = quat.y();
    qn(6) = quat.z();
    qn.tail(model.joint_count()) += v.tail(model.joint_count()) * dt;
  }
  return qn;
}

}  // namespace wbc
