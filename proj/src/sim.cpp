#include "wbc/sim.hpp"

#include "wbc/dynamics.hpp"

namespace wbc {

RobotState sim_step(const RobotModel& model, const RobotState& state,
                    const Eigen::VectorXd& tau, const ContactModel& contact, double dt) {
  if (!(dt > 0.0)) throw InvalidDuration("sim_step: dt must be > 0");
  ExternalForces ext;
  if (!contact.points.empty())
    ext = to_external_forces(contact_forces(model, state, contact), contact);
  Eigen::VectorXd qdd = forward_dynamics(model, state, tau, ext);

  RobotState next;
  next.qd = state.qd + dt * qdd;
  next.q = integrate_configuration(model, state.q, next.qd, dt);
  if (!next.q.allFinite() || !next.qd.allFinite())
    throw SimulationDiverged("sim_step: non-finite state");
  return next;
}

}  // namespace wbc
