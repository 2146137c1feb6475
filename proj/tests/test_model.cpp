#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wbc/model.hpp"

using namespace wbc;

namespace {

const char* kMiniModel = R"({
  "format": "wbc-model", "version": 1, "base_dim": 3,
  "base": {"name": "body", "mass": 2.0, "com": [0,0,0], "inertia": [0.1,0.1,0.05,0,0,0]},
  "links": [
    {"name": "arm", "mass": 0.5, "com": [0,-0.1,0], "inertia": [0.01,0.01,0.005,0,0,0],
     "joint": {"name": "shoulder", "type": "revolute", "parent": "body",
               "axis": [0,0,1], "xyz": [0.1,0,0]}}
  ],
  "frames": [{"name": "tip", "link": "arm", "xyz": [0,-0.2,0]}]
})";

}  // namespace

TEST_CASE("model loads from json") {
  RobotModel m = RobotModel::from_json(kMiniModel);
  CHECK(m.base_dim() == 3);
  CHECK(m.joint_count() == 1);
  CHECK(m.nv() == 4);
  CHECK(m.nq() == 4);
  CHECK(m.frame_id("tip") == 0);
  CHECK(m.gravity().y() == doctest::Approx(-9.81));
  CHECK(m.total_mass() == doctest::Approx(2.5));
}

TEST_CASE("model validation rejects bad input") {
  std::string bad_mass = kMiniModel;
  bad_mass.replace(bad_mass.find("\"mass\": 2.0"), 11, "\"mass\": 0.0");
  CHECK_THROWS_AS(RobotModel::from_json(bad_mass), ParseError);

  std::string bad_inertia = kMiniModel;
  bad_inertia.replace(bad_inertia.find("[0.1,0.1,0.05,0,0,0]"), 20, "[-0.1,0.1,0.05,0,0,0]");
  CHECK_THROWS_AS(RobotModel::from_json(bad_inertia), ParseError);

  CHECK_THROWS_AS(RobotModel::from_json("{ not json"), ParseError);
  CHECK_THROWS_AS(RobotModel::from_json(R"({"format":"other","version":1})"), ParseError);
}

TEST_CASE("unknown frame lookup throws") {
  RobotModel m = RobotModel::from_json(kMiniModel);
  CHECK_THROWS_AS(m.frame_id("nope"), UnknownFrame);
}

TEST_CASE("neutral state and checks") {
  RobotModel m = RobotModel::from_json(kMiniModel);
  RobotState s = neutral_state(m);
  CHECK_NOTHROW(check_state(m, s));
  s.qd(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(check_state(m, s), InvalidMatrix);
}

TEST_CASE("planar configuration integration moves along body axes") {
  RobotModel m = RobotModel::from_json(kMiniModel);
  RobotState s = neutral_state(m);
  s.q(2) = M_PI / 2.0;  // base rotated 90 degrees
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v(0) = 1.0;  // body-frame +x
  Eigen::VectorXd qn = integrate_configuration(m, s.q, v, 0.1);
  CHECK(qn(0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(qn(1) == doctest::Approx(0.1));
}

TEST_CASE("spatial quaternion stays normalized under integration") {
  RobotModel::Link base;
  base.name = "b";
  base.mass = 1.0;
  base.inertia = Eigen::Matrix3d::Identity() * 0.1;
  RobotModel m(6, base, Eigen::Vector3d(0, 0, -9.81));
  RobotState s = neutral_state(m);
  Eigen::VectorXd v(6);
  v << 0.1, -0.2, 0.3, 1.0, 2.0, -0.5;
  Eigen::VectorXd q = s.q;
  for (int i = 0; i < 500; ++i) q = integrate_configuration(m, q, v, 1e-2);
  CHECK(q.segment<4>(3).norm() == doctest::Approx(1.0).epsilon(1e-12));
}
