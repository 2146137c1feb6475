#pragma once

#include "wbc/contact.hpp"
#include "wbc/model.hpp"

namespace wbc {

/// One semi-implicit Euler step: contact forces at the current state, forward
/// dynamics, velocity then position update (base orientation renormalized by
/// the configuration integrator). Throws SimulationDiverged on non-finite
/// results.
RobotState sim_step(const RobotModel& model, const RobotState& state,
                    const Eigen::VectorXd& tau, const ContactModel& contact, double dt);

}  // namespace wbc
