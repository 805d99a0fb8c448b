#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tadv/types.hpp"

namespace tadv {

// Generalized configuration and velocity. Both built-in models are fixed
// base, so q and nu share one dimension and q_dot = nu.
struct GeneralizedState {
  Eigen::VectorXd q;
  Eigen::VectorXd nu;
};

// Terms of  M(q) nu_dot + h(q, nu) = B tau + Jc^T f  at one state, with
// h = C(q, nu) nu + G(q), plus the task-link Jacobian data used by the
// controller.
struct DynamicsTerms {
  Eigen::MatrixXd M;   // mass matrix
  Eigen::VectorXd h;   // bias vector C nu + G
  Eigen::VectorXd G;   // gravity part of h
  Eigen::MatrixXd B;   // actuation selector (identity for the built-in models)
  Eigen::MatrixXd Jc;  // contact Jacobians stacked per contact link, 6*n_c rows
  Eigen::MatrixXd J;   // task-link Jacobian, 6 rows
  Vector6d Jdot_nu;    // Jdot * nu of the task link
};

enum class ModelKind { CartesianMass, Planar3Link };

// Desk-scale models.
//
// CartesianMass: a single fully actuated 6-DoF rigid body. q stacks position
// over a fixed-axis rotation vector, M = blockdiag(m I3, I_rot), and gravity
// acts along -z. The only link is "body".
//
// Planar3Link: fixed-base revolute chain in the x-z plane, gravity along -z.
// Joint i rotates about -y so positive angles turn +x toward +z; theta_i is
// the cumulative angle of link i measured from +x. Link frames sit at the
// distal end of each link ("link1".."link3"; "ee" aliases "link3") and each
// link's CoM is at its midpoint.
struct RobotModel {
  ModelKind kind = ModelKind::CartesianMass;
  std::vector<double> masses;    // kg per link
  std::vector<double> lengths;   // m per link (Planar3Link only)
  std::vector<double> inertias;  // CartesianMass: 3 rotational moments;
                                 // Planar3Link: 1 per link about its CoM
  double gravity = 9.81;         // m/s^2, along -z
  std::string task_link;
  std::vector<std::string> contact_links;

  static RobotModel cartesian_mass(double mass,
                                   const Eigen::Vector3d& rot_inertia,
                                   double gravity = 9.81);
  static RobotModel planar_3link(const std::array<double, 3>& masses,
                                 const std::array<double, 3>& lengths,
                                 const std::array<double, 3>& inertias,
                                 double gravity = 9.81);
  // Inertias filled in as uniform rods: m l^2 / 12.
  static RobotModel planar_3link_rods(const std::array<double, 3>& masses,
                                      const std::array<double, 3>& lengths,
                                      double gravity = 9.81);

  int dim() const;  // velocity-space dimension
  void validate() const;
};

DynamicsTerms compute_terms(const RobotModel& model, const GeneralizedState& state);

// Task-link Jacobian and its velocity product: returns (J, Jdot * nu).
std::pair<Eigen::MatrixXd, Vector6d> task_jacobian(const RobotModel& model,
                                                   const GeneralizedState& state);

Eigen::MatrixXd link_jacobian(const RobotModel& model, const GeneralizedState& state,
                              const std::string& link);

// Pose of a link frame as (position, fixed-axis rotation vector).
Vector6d link_pose(const RobotModel& model, const GeneralizedState& state,
                   const std::string& link);
Vector6d task_pose(const RobotModel& model, const GeneralizedState& state);

// Solves M nu_dot = B tau + sum_k J_k^T w_k - h for nu_dot. Every wrench must
// target one of model.contact_links.
Eigen::VectorXd forward_dynamics(const RobotModel& model, const GeneralizedState& state,
                                 const Eigen::VectorXd& tau,
                                 const std::vector<std::pair<std::string, Wrench>>& fext);

// Semi-implicit Euler: nu += nu_dot dt, then q += nu dt with the new nu.
GeneralizedState step(const GeneralizedState& state, const Eigen::VectorXd& nu_dot,
                      double dt);

double kinetic_energy(const RobotModel& model, const GeneralizedState& state);
double potential_energy(const RobotModel& model, const GeneralizedState& state);

}  // namespace tadv
