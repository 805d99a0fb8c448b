#pragma once

#include "tadv/types.hpp"

namespace tadv {

// Desired-velocity magnitudes at or below this count as "not moving" for the
// decomposition and the update law.
inline constexpr double kDefaultEpsVelocity = 1e-9;
inline constexpr double kDefaultPsiDotUpper = 2.0;

struct AdvancementState {
  double psi = 0.0;
  double psi_dot = 1.0;
  double psi_dot_upper = kDefaultPsiDotUpper;
};

// Split of the wrench-induced task acceleration Omega f along the desired
// velocity direction: alpha par_dir + beta perp_dir reconstructs the input.
// alpha > 0 means the wrench helps the motion, alpha < 0 means it opposes it.
struct WrenchDecomposition {
  double alpha = 0.0;
  double beta = 0.0;  // >= 0 by construction
  Vector6d par_dir = Vector6d::Zero();
  Vector6d perp_dir = Vector6d::Zero();
};

// Decomposes omega_f against the desired velocity xdot_d. When the desired
// speed is at or below eps_v there is no motion direction to help: alpha = 0
// and everything lands in the perpendicular part.
WrenchDecomposition decompose(const Vector6d& omega_f, const Vector6d& xdot_d,
                              double eps_v = kDefaultEpsVelocity);

// Advancement update law:
//   psi_dot = min(psi_dot_upper, max(1, xdot . dx/dpsi / |dx/dpsi|^2))
// The projection measures how fast the measured task velocity traverses the
// curve; the lower clamp keeps nominal progress, the upper clamp caps how
// much assistance can accelerate it. |dx/dpsi| <= eps_v yields 1.
// psi_dot_upper < 1 is a configuration error.
double psi_dot_update(const Vector6d& xdot, const Vector6d& curve_deriv,
                      double psi_dot_upper,
                      double eps_v = kDefaultEpsVelocity);

// Explicit Euler on psi; records psi_dot in the returned state.
AdvancementState advance(const AdvancementState& state, double psi_dot, double dt);

}  // namespace tadv
