#include "tadv/advancement.hpp"

#include <algorithm>
#include <cmath>

#include "tadv/errors.hpp"

namespace tadv {

WrenchDecomposition decompose(const Vector6d& omega_f, const Vector6d& xdot_d,
                              double eps_v) {
  if (!omega_f.allFinite() || !xdot_d.allFinite()) {
    throw ContractViolation("decompose: non-finite input");
  }
  if (!(eps_v >= 0.0)) {
    throw ContractViolation("decompose: eps_v must be >= 0");
  }

  WrenchDecomposition d;
  const double speed = xdot_d.norm();
  if (speed <= eps_v) {
    // No motion direction to project on: the whole input is perpendicular.
    d.beta = omega_f.norm();
    if (d.beta > 1e-12) d.perp_dir = omega_f / d.beta;
    return d;
  }

  d.par_dir = xdot_d / speed;
  d.alpha = d.par_dir.dot(omega_f);
  const Vector6d residual = omega_f - d.alpha * d.par_dir;
  d.beta = residual.norm();
  if (d.beta > 1e-12) d.perp_dir = residual / d.beta;
  return d;
}

double psi_dot_update(const Vector6d& xdot, const Vector6d& curve_deriv,
                      double psi_dot_upper, double eps_v) {
  if (!(psi_dot_upper >= 1.0)) {
    throw ConfigError("psi_dot_update: psi_dot_upper must be >= 1");
  }
  if (!xdot.allFinite() || !curve_deriv.allFinite()) {
    throw ContractViolation("psi_dot_update: non-finite input");
  }
  if (!(eps_v >= 0.0)) {
    throw ContractViolation("psi_dot_update: eps_v must be >= 0");
  }

  const double denom = curve_deriv.squaredNorm();
  if (std::sqrt(denom) <= eps_v) return 1.0;
  const double projection = xdot.dot(curve_deriv) / denom;
  return std::min(psi_dot_upper, std::max(1.0, projection));
}

AdvancementState advance(const AdvancementState& state, double psi_dot, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ContractViolation("advance: dt must be positive");
  }
  if (!std::isfinite(psi_dot) || psi_dot < 0.0) {
    throw ContractViolation("advance: psi_dot must be finite and >= 0");
  }
  AdvancementState next = state;
  next.psi = state.psi + psi_dot * dt;
  next.psi_dot = psi_dot;
  return next;
}

}  // namespace tadv
