#pragma once

#include <Eigen/Dense>

#include "tadv/advancement.hpp"
#include "tadv/dynamics.hpp"
#include "tadv/trajectory.hpp"
#include "tadv/types.hpp"

namespace tadv {

struct Gains {
  Matrix6d Kp = Matrix6d::Identity() * 25.0;
  Matrix6d Kd = Matrix6d::Identity() * 10.0;

  static Gains diagonal(double kp, double kd);
};

// Gain matrices must be symmetric and positive definite.
void validate_gains(const Gains& gains);

// Integral of the task velocity error, clamped elementwise against windup.
struct TrackingState {
  Vector6d int_err = Vector6d::Zero();
  void reset() { int_err.setZero(); }
};

enum class ControlMode {
  CancelAll,       // torques cancel the full wrench-induced task acceleration
  RetainHelpful,   // ... except the helpful component along the desired velocity
};

// Commanded task acceleration:
//   xddot* = xddot_d - Kd (xdot - xdot_d) - Kp int(xdot - xdot_d)
Vector6d control_objective(const DesiredKinematics& kin, const Vector6d& xdot,
                           const TrackingState& tracking, const Gains& gains);

TrackingState integrate_error(TrackingState tracking, const Vector6d& xdot,
                              const Vector6d& xdot_d, double dt,
                              double windup_limit = 10.0);

// Task acceleration induced by the stacked contact wrenches:
// Omega f = J M^-1 Jc^T f.
Vector6d wrench_task_accel(const DynamicsTerms& terms, const Eigen::VectorXd& fext);

// Feedback-linearizing torque map. With Delta = J M^-1 B,
// Omega = J M^-1 Jc^T and Lambda = J M^-1 h - Jdot nu:
//   CancelAll:      tau = Delta^+ (xddot* - Omega f + Lambda)
//   RetainHelpful:  tau = Delta^+ (xddot* - Omega f + max(alpha, 0) par_dir + Lambda)
// fext stacks one wrench per contact link in model order. Throws the
// singularity error when Delta drops below its full min-dimension rank.
Eigen::VectorXd control_torques(const DynamicsTerms& terms, const Vector6d& xddot_star,
                                const Eigen::VectorXd& fext, ControlMode mode,
                                const WrenchDecomposition& decomp,
                                double pinv_rel_tol = 1e-8);

}  // namespace tadv
