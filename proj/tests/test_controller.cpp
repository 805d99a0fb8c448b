#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracle_helpers.hpp"
#include "tadv/controller.hpp"
#include "tadv/dynamics.hpp"
#include "tadv/errors.hpp"
#include "tadv/scenario.hpp"
#include "tadv/trajectory.hpp"

using namespace tadv;

namespace {

RobotModel cart() { return RobotModel::cartesian_mass(5.0, Eigen::Vector3d::Ones()); }

RobotModel planar() {
  return RobotModel::planar_3link_rods({2.0, 1.5, 1.0}, {0.5, 0.4, 0.3}, 9.81);
}

// Planar states near the stretched or folded chain make the task map lose
// rank; sample configurations where it keeps a healthy margin.
GeneralizedState well_conditioned_planar_state(const RobotModel& m,
                                               std::mt19937& gen) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd;
  for (;;) {
    GeneralizedState s;
    s.q = oracle::random_vec(3, -2.0, 2.0, gen);
    s.nu = oracle::random_vec(3, -1.0, 1.0, gen);
    const DynamicsTerms T = compute_terms(m, s);
    Eigen::Matrix3d plane;
    plane.row(0) = T.J.row(0);
    plane.row(1) = T.J.row(2);
    plane.row(2) = T.J.row(4);
    svd.compute(plane);
    if (svd.singularValues()(2) > 0.1) return s;
  }
}

// Closed-loop task acceleration for given torques and injected wrench.
Vector6d closed_loop_accel(const RobotModel& m, const GeneralizedState& s,
                           const Eigen::VectorXd& tau, const Wrench& w) {
  const DynamicsTerms T = compute_terms(m, s);
  const Eigen::VectorXd nu_dot =
      forward_dynamics(m, s, tau, {{m.contact_links.front(), w}});
  return T.J * nu_dot + T.Jdot_nu;
}

Vector6d planar_task_accel_target(std::mt19937& gen) {
  Vector6d a = Vector6d::Zero();
  a(0) = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
  a(2) = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
  a(4) = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
  return a;
}

}  // namespace

TEST_CASE("gain validation") {
  CHECK_NOTHROW(validate_gains(Gains::diagonal(25.0, 10.0)));

  Gains g = Gains::diagonal(25.0, 10.0);
  g.Kp(0, 1) = 0.5;  // asymmetric
  CHECK_THROWS_AS(validate_gains(g), ContractViolation);

  g = Gains::diagonal(25.0, 10.0);
  g.Kd(3, 3) = -1.0;
  CHECK_THROWS_AS(validate_gains(g), ContractViolation);

  g = Gains::diagonal(0.0, 10.0);  // only semidefinite
  CHECK_THROWS_AS(validate_gains(g), ContractViolation);

  g = Gains::diagonal(25.0, 10.0);
  g.Kp(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_gains(g), ContractViolation);
}

TEST_CASE("control objective combines feedforward and feedback terms") {
  std::mt19937 gen(101);
  const Gains gains = Gains::diagonal(25.0, 10.0);
  for (int i = 0; i < 20; ++i) {
    DesiredKinematics kin;
    kin.x_d << oracle::random_vec(6, -1, 1, gen);
    kin.xdot_d << oracle::random_vec(6, -1, 1, gen);
    kin.xddot_d << oracle::random_vec(6, -1, 1, gen);
    Vector6d xdot;
    xdot << oracle::random_vec(6, -1, 1, gen);
    TrackingState tr;
    tr.int_err << oracle::random_vec(6, -1, 1, gen);

    const Vector6d got = control_objective(kin, xdot, tr, gains);
    const Vector6d want =
        kin.xddot_d - gains.Kd * (xdot - kin.xdot_d) - gains.Kp * tr.int_err;
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("error integral accumulates and clamps") {
  std::mt19937 gen(103);
  TrackingState tr;
  Vector6d running = Vector6d::Zero();
  const double dt = 1e-2;
  for (int k = 0; k < 200; ++k) {
    Vector6d xdot, xdot_d;
    xdot << oracle::random_vec(6, -1, 1, gen);
    xdot_d << oracle::random_vec(6, -1, 1, gen);
    tr = integrate_error(tr, xdot, xdot_d, dt);
    running += (xdot - xdot_d) * dt;
    running = running.cwiseMax(-10.0).cwiseMin(10.0);
    CHECK((tr.int_err - running).cwiseAbs().maxCoeff() < 1e-15);
  }

  // Constant large error saturates exactly at the windup limit.
  TrackingState sat;
  Vector6d fast = Vector6d::Constant(100.0);
  for (int k = 0; k < 50; ++k) {
    sat = integrate_error(sat, fast, Vector6d::Zero(), 0.1, 3.0);
  }
  CHECK(sat.int_err.maxCoeff() == 3.0);
  CHECK(sat.int_err.minCoeff() == 3.0);

  sat.reset();
  CHECK(sat.int_err.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(integrate_error(sat, fast, Vector6d::Zero(), 0.0, 3.0),
                  ContractViolation);
  CHECK_THROWS_AS(integrate_error(sat, fast, Vector6d::Zero(), 0.1, 0.0),
                  ContractViolation);
}

TEST_CASE("wrench task acceleration on the free body is force over mass") {
  const RobotModel m = cart();
  GeneralizedState s;
  s.q = Eigen::VectorXd::Zero(6);
  s.nu = Eigen::VectorXd::Zero(6);
  const DynamicsTerms T = compute_terms(m, s);
  Eigen::VectorXd f(6);
  f << 10.0, -5.0, 2.5, 1.0, 0.0, 3.0;
  const Vector6d acc = wrench_task_accel(T, f);
  CHECK(acc(0) == doctest::Approx(2.0));
  CHECK(acc(1) == doctest::Approx(-1.0));
  CHECK(acc(3) == doctest::Approx(1.0));

  CHECK_THROWS_AS(wrench_task_accel(T, Eigen::VectorXd::Zero(5)),
                  ContractViolation);
}

TEST_CASE("free body torques reduce to mass times objective plus bias") {
  const RobotModel m = cart();
  std::mt19937 gen(107);
  GeneralizedState s;
  s.q = oracle::random_vec(6, -1, 1, gen);
  s.nu = oracle::random_vec(6, -1, 1, gen);
  const DynamicsTerms T = compute_terms(m, s);

  Vector6d xddot_star;
  xddot_star << oracle::random_vec(6, -2, 2, gen);
  const Eigen::VectorXd tau = control_torques(T, xddot_star,
                                              Eigen::VectorXd::Zero(6),
                                              ControlMode::CancelAll, {});
  const Vector6d expect = T.M * xddot_star + T.h;
  CHECK((tau - expect).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("cancel-all makes the closed loop follow the objective exactly") {
  std::mt19937 gen(109);

  SUBCASE("free body") {
    const RobotModel m = cart();
    for (int i = 0; i < 25; ++i) {
      GeneralizedState s;
      s.q = oracle::random_vec(6, -1, 1, gen);
      s.nu = oracle::random_vec(6, -1, 1, gen);
      const DynamicsTerms T = compute_terms(m, s);
      Vector6d xddot_star;
      xddot_star << oracle::random_vec(6, -2, 2, gen);
      Wrench w;
      w << oracle::random_vec(6, -20, 20, gen);

      const Eigen::VectorXd tau =
          control_torques(T, xddot_star, w, ControlMode::CancelAll, {});
      const Vector6d accel = closed_loop_accel(m, s, tau, w);
      CHECK((accel - xddot_star).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("planar chain") {
    const RobotModel m = planar();
    for (int i = 0; i < 25; ++i) {
      const GeneralizedState s = well_conditioned_planar_state(m, gen);
      const DynamicsTerms T = compute_terms(m, s);
      const Vector6d xddot_star = planar_task_accel_target(gen);
      Wrench w;
      w << oracle::random_vec(6, -10, 10, gen);

      const Eigen::VectorXd tau =
          control_torques(T, xddot_star, w, ControlMode::CancelAll, {});
      const Vector6d accel = closed_loop_accel(m, s, tau, w);
      CHECK((accel - xddot_star).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("closed loop does not move when the injected wrench changes") {
  std::mt19937 gen(113);
  const RobotModel m = cart();
  GeneralizedState s;
  s.q = oracle::random_vec(6, -1, 1, gen);
  s.nu = oracle::random_vec(6, -1, 1, gen);
  const DynamicsTerms T = compute_terms(m, s);
  Vector6d xddot_star;
  xddot_star << oracle::random_vec(6, -2, 2, gen);

  Wrench w1, w2;
  w1 << oracle::random_vec(6, -30, 30, gen);
  w2 << oracle::random_vec(6, -30, 30, gen);
  const Vector6d a1 = closed_loop_accel(
      m, s, control_torques(T, xddot_star, w1, ControlMode::CancelAll, {}), w1);
  const Vector6d a2 = closed_loop_accel(
      m, s, control_torques(T, xddot_star, w2, ControlMode::CancelAll, {}), w2);
  CHECK((a1 - a2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("retain-helpful keeps the parallel push in the closed loop") {
  const RobotModel m = cart();
  GeneralizedState s;
  s.q = Eigen::VectorXd::Zero(6);
  s.nu = Eigen::VectorXd::Zero(6);
  const DynamicsTerms T = compute_terms(m, s);

  Vector6d xdot_d = Vector6d::Zero();
  xdot_d(0) = 0.5;  // desired motion along +x
  Wrench w = Wrench::Zero();
  w << 10.0, 0.0, 4.0, 0.0, 0.0, 0.0;  // push partly along, partly across

  const Vector6d omega_f = wrench_task_accel(T, w);
  const WrenchDecomposition dec = decompose(omega_f, xdot_d);
  CHECK(dec.alpha == doctest::Approx(2.0));  // 10 N / 5 kg along +x

  Vector6d xddot_star;
  xddot_star << 0.1, 0.0, -0.2, 0.0, 0.0, 0.0;
  const Eigen::VectorXd tau =
      control_torques(T, xddot_star, w, ControlMode::RetainHelpful, dec);
  const Vector6d accel = closed_loop_accel(m, s, tau, w);
  const Vector6d expect = xddot_star + dec.alpha * dec.par_dir;
  CHECK((accel - expect).cwiseAbs().maxCoeff() < 1e-10);
  // The perpendicular part of the push is cancelled: no z acceleration beyond
  // the objective.
  CHECK(accel(2) == doctest::Approx(xddot_star(2)));
}

TEST_CASE("unhelpful wrench leaves retain-helpful identical to cancel-all") {
  const RobotModel m = cart();
  GeneralizedState s;
  s.q = Eigen::VectorXd::Zero(6);
  s.nu = Eigen::VectorXd::Zero(6);
  const DynamicsTerms T = compute_terms(m, s);

  Vector6d xdot_d = Vector6d::Zero();
  xdot_d(0) = 0.5;
  Wrench w = Wrench::Zero();
  w(0) = -8.0;  // opposes the desired motion

  const WrenchDecomposition dec = decompose(wrench_task_accel(T, w), xdot_d);
  CHECK(dec.alpha < 0.0);

  Vector6d xddot_star;
  xddot_star << 0.3, 0.0, 0.0, 0.0, 0.0, 0.0;
  const Eigen::VectorXd retain =
      control_torques(T, xddot_star, w, ControlMode::RetainHelpful, dec);
  const Eigen::VectorXd cancel =
      control_torques(T, xddot_star, w, ControlMode::CancelAll, dec);
  for (int i = 0; i < retain.size(); ++i) {
    CHECK(retain(i) == cancel(i));  // bitwise: the branch must not be taken
  }
}

TEST_CASE("stretched planar chain raises the singularity error") {
  const RobotModel m = planar();
  GeneralizedState s;
  s.q = Eigen::VectorXd::Zero(3);  // fully stretched: no x motion available
  s.nu = Eigen::VectorXd::Zero(3);
  const DynamicsTerms T = compute_terms(m, s);

  bool thrown = false;
  try {
    control_torques(T, Vector6d::Zero(), Eigen::VectorXd::Zero(6),
                    ControlMode::CancelAll, {});
  } catch (const SingularityError& e) {
    thrown = true;
    CHECK(e.sigma_min() >= 0.0);
    CHECK(e.sigma_min() < 1e-8);
  }
  CHECK(thrown);
}

TEST_CASE("controller contract checks") {
  const RobotModel m = cart();
  GeneralizedState s;
  s.q = Eigen::VectorXd::Zero(6);
  s.nu = Eigen::VectorXd::Zero(6);
  const DynamicsTerms T = compute_terms(m, s);

  Vector6d bad = Vector6d::Zero();
  bad(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(control_torques(T, bad, Eigen::VectorXd::Zero(6),
                                  ControlMode::CancelAll, {}),
                  ContractViolation);
  CHECK_THROWS_AS(control_torques(T, Vector6d::Zero(), Eigen::VectorXd::Zero(7),
                                  ControlMode::CancelAll, {}),
                  ContractViolation);
}

TEST_CASE("closed loop tracks the reference curve tightly") {
  const RobotModel m = cart();
  const ParamCurve curve = build_standup_reference(StandUpWaypoints::defaults());
  const Gains gains = Gains::diagonal(25.0, 10.0);

  GeneralizedState s;
  s.q = curve.eval(0.0);
  s.nu = curve.deriv(0.0);
  TrackingState tr;
  const double dt = 1e-3;

  double max_vel_err = 0.0;
  double max_pos_err = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double t = k * dt;
    const DynamicsTerms T = compute_terms(m, s);
    const DesiredKinematics kin = desired_kinematics(curve, t, 1.0);
    const Vector6d xdot = T.J * s.nu;
    const Vector6d xddot_star = control_objective(kin, xdot, tr, gains);
    const Eigen::VectorXd tau = control_torques(
        T, xddot_star, Eigen::VectorXd::Zero(6), ControlMode::CancelAll, {});
    const Eigen::VectorXd nu_dot = forward_dynamics(m, s, tau, {});
    tr = integrate_error(tr, xdot, kin.xdot_d, dt);
    s = step(s, nu_dot, dt);
    max_vel_err = std::max(max_vel_err, (T.J * s.nu - kin.xdot_d).norm());
    max_pos_err = std::max(max_pos_err, (task_pose(m, s) - kin.x_d).norm());
  }
  CHECK(max_vel_err < 1e-3);
  CHECK(max_pos_err < 2e-3);
}
