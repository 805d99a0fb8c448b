#include "tadv/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "tadv/errors.hpp"

namespace tadv {

ParamCurve build_curve(const std::vector<Waypoint>& waypoints) {
  if (waypoints.size() < 2) {
    throw ContractViolation("build_curve: need at least two waypoints");
  }
  if (waypoints.front().psi != 0.0) {
    throw ContractViolation("build_curve: first knot must sit at psi = 0");
  }
  for (size_t i = 0; i < waypoints.size(); ++i) {
    if (!std::isfinite(waypoints[i].psi) || !waypoints[i].pose.allFinite()) {
      throw ContractViolation("build_curve: non-finite waypoint");
    }
    if (i > 0 && !(waypoints[i].psi > waypoints[i - 1].psi)) {
      throw ContractViolation("build_curve: knots must strictly increase");
    }
  }

  const int n = static_cast<int>(waypoints.size());
  const int nseg = n - 1;

  ParamCurve c;
  c.waypoints_ = waypoints;
  c.knots_.resize(n);
  for (int i = 0; i < n; ++i) c.knots_[i] = waypoints[i].psi;

  std::vector<double> h(nseg);
  for (int i = 0; i < nseg; ++i) h[i] = c.knots_[i + 1] - c.knots_[i];

  // Second-derivative moments per dimension; natural boundary pins the end
  // moments at zero, the interior ones come from a tridiagonal Thomas solve.
  Eigen::MatrixXd mom = Eigen::MatrixXd::Zero(n, 6);
  if (n > 2) {
    const int m = n - 2;
    Eigen::VectorXd sub(m), diag(m), sup(m);
    Eigen::MatrixXd rhs(m, 6);
    for (int i = 1; i <= m; ++i) {
      sub(i - 1) = h[i - 1];
      diag(i - 1) = 2.0 * (h[i - 1] + h[i]);
      sup(i - 1) = h[i];
      for (int k = 0; k < 6; ++k) {
        rhs(i - 1, k) =
            6.0 * ((waypoints[i + 1].pose(k) - waypoints[i].pose(k)) / h[i] -
                   (waypoints[i].pose(k) - waypoints[i - 1].pose(k)) / h[i - 1]);
      }
    }
    for (int i = 1; i < m; ++i) {
      const double w = sub(i) / diag(i - 1);
      diag(i) -= w * sup(i - 1);
      rhs.row(i) -= w * rhs.row(i - 1);
    }
    mom.row(m) = rhs.row(m - 1) / diag(m - 1);
    for (int i = m - 1; i >= 1; --i) {
      mom.row(i) = (rhs.row(i - 1) - sup(i - 1) * mom.row(i + 1)) / diag(i - 1);
    }
  }

  c.coeffs_.resize(nseg);
  for (int i = 0; i < nseg; ++i) {
    for (int k = 0; k < 6; ++k) {
      const double y0 = waypoints[i].pose(k);
      const double y1 = waypoints[i + 1].pose(k);
      const double m0 = mom(i, k);
      const double m1 = mom(i + 1, k);
      c.coeffs_[i](k, 0) = y0;
      c.coeffs_[i](k, 1) = (y1 - y0) / h[i] - h[i] * (2.0 * m0 + m1) / 6.0;
      c.coeffs_[i](k, 2) = 0.5 * m0;
      c.coeffs_[i](k, 3) = (m1 - m0) / (6.0 * h[i]);
    }
  }
  return c;
}

int ParamCurve::segment_of(double psi) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), psi);
  const int idx = static_cast<int>(std::distance(knots_.begin(), it)) - 1;
  return std::clamp(idx, 0, static_cast<int>(coeffs_.size()) - 1);
}

Vector6d ParamCurve::eval(double psi) const {
  if (!(psi >= 0.0)) {  // also rejects NaN
    throw ContractViolation("curve: psi must be >= 0");
  }
  if (psi >= psi_end()) return waypoints_.back().pose;
  const int i = segment_of(psi);
  const double t = psi - knots_[i];
  const auto& C = coeffs_[i];
  return C.col(0) + t * (C.col(1) + t * (C.col(2) + t * C.col(3)));
}

Vector6d ParamCurve::deriv(double psi) const {
  if (!(psi >= 0.0)) {
    throw ContractViolation("curve: psi must be >= 0");
  }
  if (psi >= psi_end()) return Vector6d::Zero();
  const int i = segment_of(psi);
  const double t = psi - knots_[i];
  const auto& C = coeffs_[i];
  return C.col(1) + t * (2.0 * C.col(2) + 3.0 * t * C.col(3));
}

Vector6d ParamCurve::deriv2(double psi) const {
  if (!(psi >= 0.0)) {
    throw ContractViolation("curve: psi must be >= 0");
  }
  if (psi >= psi_end()) return Vector6d::Zero();
  const int i = segment_of(psi);
  const double t = psi - knots_[i];
  const auto& C = coeffs_[i];
  return 2.0 * C.col(2) + 6.0 * t * C.col(3);
}

DesiredKinematics desired_kinematics(const ParamCurve& curve, double psi,
                                     double psi_dot) {
  if (!std::isfinite(psi_dot) || psi_dot < 0.0) {
    throw ContractViolation("desired_kinematics: psi_dot must be finite and >= 0");
  }
  DesiredKinematics kin;
  kin.x_d = curve.eval(psi);
  kin.xdot_d = curve.deriv(psi) * psi_dot;
  kin.xddot_d = curve.deriv2(psi) * psi_dot * psi_dot;
  return kin;
}

}  // namespace tadv
