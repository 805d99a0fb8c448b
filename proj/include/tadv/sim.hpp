#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tadv/advancement.hpp"
#include "tadv/controller.hpp"
#include "tadv/dynamics.hpp"
#include "tadv/scenario.hpp"
#include "tadv/trajectory.hpp"
#include "tadv/types.hpp"

namespace tadv {

// A run reaches the goal when |x - x_d(psi_end)| first drops to this.
inline constexpr double kGoalTolerance = 1e-3;

struct SimConfig {
  RobotModel model;
  std::vector<Waypoint> waypoints;

  Gains gains;
  ControlMode mode = ControlMode::RetainHelpful;
  double pinv_rel_tol = 1e-8;
  double windup_limit = 10.0;

  bool advancement = true;
  double psi_dot_upper = kDefaultPsiDotUpper;
  double eps_v = kDefaultEpsVelocity;

  Thresholds thresholds;
  WrenchProfile profile;
  // Link the hands-channel wrench acts on; empty selects the first contact
  // link. The feet channel is a scripted sensor signal for the phase machine
  // and never enters the dynamics.
  std::string hands_apply_link;

  double dt = 1e-3;
  double duration = 8.0;
  // CartesianMass defaults to starting on the curve at nominal speed;
  // Planar3Link has no inverse kinematics here, so initial_q is required.
  std::optional<Eigen::VectorXd> initial_q;
  std::optional<Eigen::VectorXd> initial_nu;

  std::string out_dir = "out";

  void validate() const;
};

struct LogRow {
  double t = 0.0;
  int phase = 1;
  double psi = 0.0;
  double psi_dot = 1.0;
  Vector6d x = Vector6d::Zero();
  Vector6d x_d = Vector6d::Zero();
  Vector6d xdot = Vector6d::Zero();
  Vector6d xdot_d = Vector6d::Zero();
  Wrench f_hands = Wrench::Zero();
  Wrench f_feet = Wrench::Zero();
  double alpha = 0.0;
  Eigen::VectorXd tau;
};

struct SimSummary {
  double final_psi = 0.0;
  double time_to_goal = std::numeric_limits<double>::infinity();
  double max_psi_dot = 0.0;
  int steps = 0;
};

struct SimResult {
  std::vector<LogRow> log;
  SimSummary summary;
};

// Deterministic single-rate loop. Each step reads the scripted wrenches,
// updates the phase observer, runs the update law and the controller, logs
// the pre-advance state, then integrates psi and the model. Module errors are
// rethrown with the failing step prepended to the message.
SimResult run_simulation(const SimConfig& config);

}  // namespace tadv
