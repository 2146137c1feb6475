#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wbc/constraints.hpp"
#include "wbc/lexls.hpp"
#include "wbc/model.hpp"

namespace wbc {

/// A physically consistent random problem: a random kinematic tree in a
/// random state with constraint rows taken from actual model frames, plus a
/// task cascade that pins the optimum (the lowest motion/force levels span
/// all coordinates, as the paper's posture level does).
struct RandomInstance {
  RobotModel model;
  RobotState state;
  ConstraintSet constraints;
  std::vector<TaskLevel> motion_levels;  // over qdd, nv columns
  std::vector<TaskLevel> force_levels;   // over f_f, k_f columns
  Eigen::VectorXd f_hat;
  bool jf_deficient = false;
};

struct InstanceParams {
  int n_min = 4;
  int n_max = 30;
  int kf_max = 12;
  bool allow_planar = true;
  bool allow_spatial = true;
  double deficient_jf_prob = 0.25;
};

RandomInstance random_instance(std::mt19937_64& rng, const InstanceParams& params = {});

/// Fixed-size variant for benchmarks: exact n, k_s, k_f (k_s >= base_dim).
RandomInstance sized_instance(std::mt19937_64& rng, int base_dim, int n, int ks, int kf);

/// Random serial-chain model (shared by the instance generators and tests).
RobotModel random_chain_model(std::mt19937_64& rng, int base_dim, int joints, int frames);
RobotState random_state(std::mt19937_64& rng, const RobotModel& model);

/// The rank-condition discriminator pair: a spatial model standing on one
/// flat 6-DoF foot (sufficiently constrained) vs the same model on two
/// 3-DoF point feet (rank(J_s) = 6 but rank(J_s Sbar^T) = 5).
struct DiscriminatorPair {
  RobotModel model;
  RobotState state;
  ConstraintSet flat_foot;
  ConstraintSet point_feet;
};
DiscriminatorPair rank_condition_pair();

}  // namespace wbc
