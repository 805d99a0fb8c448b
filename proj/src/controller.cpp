#include "tadv/controller.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "tadv/errors.hpp"
#include "tadv/linalg.hpp"

namespace tadv {
namespace {

void check_spd(const Matrix6d& K, const char* name) {
  if (!K.allFinite()) {
    throw ContractViolation(std::string("gains: ") + name + " has non-finite entries");
  }
  if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ContractViolation(std::string("gains: ") + name + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(K);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw ContractViolation(std::string("gains: ") + name + " must be positive definite");
  }
}

}  // namespace

Gains Gains::diagonal(double kp, double kd) {
  Gains g;
  g.Kp = Matrix6d::Identity() * kp;
  g.Kd = Matrix6d::Identity() * kd;
  return g;
}

void validate_gains(const Gains& gains) {
  check_spd(gains.Kp, "Kp");
  check_spd(gains.Kd, "Kd");
}

Vector6d control_objective(const DesiredKinematics& kin, const Vector6d& xdot,
                           const TrackingState& tracking, const Gains& gains) {
  if (!xdot.allFinite() || !tracking.int_err.allFinite()) {
    throw ContractViolation("control_objective: non-finite input");
  }
  const Vector6d vel_err = xdot - kin.xdot_d;
  return kin.xddot_d - gains.Kd * vel_err - gains.Kp * tracking.int_err;
}

TrackingState integrate_error(TrackingState tracking, const Vector6d& xdot,
                              const Vector6d& xdot_d, double dt,
                              double windup_limit) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ContractViolation("integrate_error: dt must be positive");
  }
  if (!(windup_limit > 0.0)) {
    throw ContractViolation("integrate_error: windup_limit must be positive");
  }
  if (!xdot.allFinite() || !xdot_d.allFinite()) {
    throw ContractViolation("integrate_error: non-finite input");
  }
  tracking.int_err += (xdot - xdot_d) * dt;
  tracking.int_err = tracking.int_err.cwiseMax(-windup_limit).cwiseMin(windup_limit);
  return tracking;
}

Vector6d wrench_task_accel(const DynamicsTerms& terms, const Eigen::VectorXd& fext) {
  if (fext.size() != terms.Jc.rows()) {
    throw ContractViolation("wrench_task_accel: fext does not match stacked contacts");
  }
  if (fext.size() == 0) return Vector6d::Zero();
  Eigen::LLT<Eigen::MatrixXd> llt(terms.M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("wrench_task_accel: mass matrix not positive definite");
  }
  return terms.J * llt.solve(terms.Jc.transpose() * fext);
}

Eigen::VectorXd control_torques(const DynamicsTerms& terms, const Vector6d& xddot_star,
                                const Eigen::VectorXd& fext, ControlMode mode,
                                const WrenchDecomposition& decomp,
                                double pinv_rel_tol) {
  if (!xddot_star.allFinite() || !fext.allFinite()) {
    throw ContractViolation("control_torques: non-finite input");
  }
  if (fext.size() != terms.Jc.rows()) {
    throw ContractViolation("control_torques: fext does not match stacked contacts");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(terms.M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("control_torques: mass matrix not positive definite");
  }

  const Eigen::MatrixXd delta = terms.J * llt.solve(terms.B);
  const Vector6d lambda = terms.J * llt.solve(terms.h) - terms.Jdot_nu;
  Vector6d omega_f = Vector6d::Zero();
  if (fext.size() > 0) {
    omega_f = terms.J * llt.solve(terms.Jc.transpose() * fext);
  }

  Vector6d target = xddot_star - omega_f + lambda;
  if (mode == ControlMode::RetainHelpful && decomp.alpha > 0.0) {
    // Put the helpful share of the wrench back so the assistance still
    // accelerates the task along the desired direction.
    target += decomp.alpha * decomp.par_dir;
  }

  const PinvResult p = pinv_truncated(delta, pinv_rel_tol);
  const int full_rank = static_cast<int>(std::min(delta.rows(), delta.cols()));
  if (p.rank < full_rank) {
    throw SingularityError("control_torques: task map rank-deficient", p.sigma_min);
  }
  return p.pinv * target;
}

}  // namespace tadv
