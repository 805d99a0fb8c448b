#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tadv/types.hpp"

namespace tadv {

struct Waypoint {
  double psi = 0.0;
  Vector6d pose = Vector6d::Zero();
};

// Reference pose path x_d(psi): per-dimension natural cubic splines over the
// free parameter psi. The spline interpolates every waypoint. Beyond the last
// knot the curve clamps to the final pose with zero first and second
// derivative, so a finished reference holds its endpoint.
class ParamCurve {
 public:
  Vector6d eval(double psi) const;
  Vector6d deriv(double psi) const;
  Vector6d deriv2(double psi) const;

  double psi_end() const { return knots_.back(); }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

  // Per-segment cubic coefficients, pose(t) = c0 + c1 t + c2 t^2 + c3 t^3
  // with t = psi - knot[i]. One 6x4 block per segment.
  const std::vector<Eigen::Matrix<double, 6, 4>>& segment_coeffs() const {
    return coeffs_;
  }

 private:
  friend ParamCurve build_curve(const std::vector<Waypoint>& waypoints);

  int segment_of(double psi) const;

  std::vector<Waypoint> waypoints_;
  std::vector<double> knots_;
  std::vector<Eigen::Matrix<double, 6, 4>> coeffs_;
};

// Fits the natural cubic spline. Knots must start at 0 and strictly increase;
// at least two waypoints are required.
ParamCurve build_curve(const std::vector<Waypoint>& waypoints);

struct DesiredKinematics {
  Vector6d x_d = Vector6d::Zero();
  Vector6d xdot_d = Vector6d::Zero();
  Vector6d xddot_d = Vector6d::Zero();
};

// Chain rule through psi(t): xdot_d = dx/dpsi psi_dot and
// xddot_d = d2x/dpsi2 psi_dot^2 (psi_ddot is treated as zero; the update law
// output changes slowly between steps and the feedback terms absorb the
// difference).
DesiredKinematics desired_kinematics(const ParamCurve& curve, double psi,
                                     double psi_dot);

}  // namespace tadv
