#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wbc/contact.hpp"
#include "wbc/model.hpp"
#include "wbc/solver.hpp"

namespace wbc {

/// Task schedule entries inside a phase. Targets are resolved at phase start
/// (min-jerk from the measured value) so references stay continuous across
/// phase boundaries.
struct ComTaskSpec {
  bool active = false;
  double offset_x = 0.0;        // target = com_x at phase start + offset
  std::optional<double> absolute_x;
  double move_duration = 0.0;   // 0 = hold for the whole phase
  int priority = 3;
};

struct FootTaskSpec {
  bool active = false;
  std::string constraint;       // constraint frame to steer (pose task)
  double dx = 0.0, dy = 0.0, dtheta = 0.0;
  double move_duration = 0.0;
  int priority = 4;
};

enum class ForceRampMode { ToZero, ToWeightShare, Hold };

struct ForceTaskSpec {
  bool active = false;
  std::string constraint;       // controlled constraint frame
  ForceRampMode mode = ForceRampMode::Hold;
  Eigen::VectorXd hold_target;  // for Hold (e.g. hand normal force)
  double ramp_duration = 0.0;   // 0 = whole phase
  int priority = 1;
};

struct Phase {
  double duration = 0.0;
  std::vector<std::string> supporting;   // constraint frame names
  std::vector<std::string> controlled;
  ComTaskSpec com;
  FootTaskSpec foot;
  std::vector<ForceTaskSpec> forces;
};

/// Named constraint attachment: a robot frame acting as a flat contact
/// (3 rows) or a single-direction contact against a surface (1 row).
struct ConstraintFrameSpec {
  std::string name;
  std::string frame;
  bool flat = true;
  std::string surface;  // for 1-row normal constraints
};

struct ScenarioScript {
  std::string name;
  std::string model_path;
  double control_dt = 1e-3;
  int substeps = 4;
  double kp = 10.0, kd = 5.0;
  int posture_priority = 9;
  ContactParams contact_params;
  std::vector<ContactSurface> surfaces;
  std::vector<std::pair<std::string, std::string>> contact_points;  // frame, surface
  std::vector<ConstraintFrameSpec> constraint_frames;
  std::vector<Phase> phases;
  Eigen::Vector3d wl = Eigen::Vector3d(10.0, 0.1, 100.0);  // planar (fx, fy, mz) weights
  bool force_optimization = false;
  bool parallel_solve = false;
  Eigen::VectorXd initial_joint_angles;   // optional posture override
  double initial_base_drop = 0.0;         // pre-settled penetration
  double total_duration() const;

  static ScenarioScript from_json(const std::string& text, const std::string& base_dir);
  static ScenarioScript load_file(const std::string& path);
};

/// One control tick of the log. Vectors are sized per scenario; the CSV
/// writer documents the column schema in the header row.
struct LogRow {
  double t = 0.0;
  int phase = 0;
  bool switched = false;  // constraint set changed at this tick
  Eigen::VectorXd q, qd, tau;
  Eigen::VectorXd ff_cmd;            // commanded controlled forces (padded)
  Eigen::Vector3d right_wrench = Eigen::Vector3d::Zero();  // measured wrench at the tracked frame
  double com_x = 0.0, com_ref = 0.0;
  double force_tracked = 0.0, force_ref = 0.0;  // scalar regulated component
  double cop = 0.0;
  bool cop_valid = false;
};

struct ScenarioResult {
  std::vector<LogRow> rows;
  std::vector<std::string> tau_names;
  double max_tau_step_at_switch = 0.0;   // max |dtau|_inf across switch ticks
  double max_tau_step_overall = 0.0;
  double max_force_step_at_liftoff = 0.0;  // measured normal-force step when a
                                           // controlled constraint disappears
  double force_rmse = 0.0;      // tracked force component vs its reference
  double force_steady_error = 0.0;  // mean |err| over the final 2 s of regulation
  double com_rmse = 0.0;        // m
  std::string tracked_constraint;
};

class ScenarioRunner {
 public:
  ScenarioRunner(const RobotModel& model, ScenarioScript script);
  ScenarioResult run();

 private:
  const RobotModel& model_;
  ScenarioScript script_;
};

ScenarioResult run_scenario(const RobotModel& model, const ScenarioScript& script);

/// CSV log + JSON sidecar (options, metrics; timing quarantined there).
void write_log_csv(const ScenarioResult& result, const std::string& path);
void write_log_sidecar(const ScenarioResult& result, const ScenarioScript& script,
                       const std::string& path);

}  // namespace wbc
