#include "tadv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "tadv/errors.hpp"

namespace tadv {
namespace {

int contact_slot(const RobotModel& model, const std::string& link) {
  for (size_t i = 0; i < model.contact_links.size(); ++i) {
    if (model.contact_links[i] == link) return static_cast<int>(i);
  }
  throw ConfigError("hands_apply_link must be one of the model contact links: " + link);
}

GeneralizedState initial_state(const SimConfig& cfg, const ParamCurve& curve) {
  const int n = cfg.model.dim();
  GeneralizedState s;
  if (cfg.initial_q) {
    if (cfg.initial_q->size() != n) {
      throw ConfigError("initial_q dimension mismatch");
    }
    s.q = *cfg.initial_q;
  } else if (cfg.model.kind == ModelKind::CartesianMass) {
    // Start on the curve so the run begins with zero tracking error.
    s.q = curve.eval(0.0);
  } else {
    throw ConfigError("planar-3link runs need initial_q");
  }
  if (cfg.initial_nu) {
    if (cfg.initial_nu->size() != n) {
      throw ConfigError("initial_nu dimension mismatch");
    }
    s.nu = *cfg.initial_nu;
  } else if (cfg.model.kind == ModelKind::CartesianMass) {
    s.nu = curve.deriv(0.0);  // nominal playback speed psi_dot = 1
  } else {
    s.nu = Eigen::VectorXd::Zero(n);
  }
  if (!s.q.allFinite() || !s.nu.allFinite()) {
    throw ConfigError("initial state must be finite");
  }
  return s;
}

std::string step_context(int k, double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "step %d (t=%g): ", k, t);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  model.validate();
  validate_gains(gains);
  validate_thresholds(thresholds);
  validate_profile(profile);
  build_curve(waypoints);  // checks waypoint count and knot ordering
  if (!(pinv_rel_tol >= 0.0) || !std::isfinite(pinv_rel_tol)) {
    throw ConfigError("pinv_rel_tol must be >= 0");
  }
  if (!(windup_limit > 0.0) || !std::isfinite(windup_limit)) {
    throw ConfigError("windup_limit must be positive");
  }
  if (!(psi_dot_upper >= 1.0) || !std::isfinite(psi_dot_upper)) {
    throw ConfigError("psi_dot_upper must be >= 1");
  }
  if (!(eps_v >= 0.0) || !std::isfinite(eps_v)) {
    throw ConfigError("eps_v must be >= 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt must be positive");
  }
  if (!(duration >= dt) || !std::isfinite(duration)) {
    throw ConfigError("duration must be at least one step");
  }
  if (!hands_apply_link.empty()) {
    contact_slot(model, hands_apply_link);
  }
  if (model.kind == ModelKind::Planar3Link && !initial_q) {
    throw ConfigError("planar-3link runs need initial_q");
  }
  if (initial_q && initial_q->size() != model.dim()) {
    throw ConfigError("initial_q dimension mismatch");
  }
}

SimResult run_simulation(const SimConfig& cfg) {
  cfg.validate();

  const ParamCurve curve = build_curve(cfg.waypoints);
  const Vector6d x_goal = curve.eval(curve.psi_end());
  const std::string hands_link =
      cfg.hands_apply_link.empty() ? cfg.model.contact_links.front() : cfg.hands_apply_link;
  const int hands_slot = contact_slot(cfg.model, hands_link);

  GeneralizedState state = initial_state(cfg, curve);
  AdvancementState adv;
  adv.psi_dot_upper = cfg.psi_dot_upper;
  TrackingState tracking;
  StandUpPhase phase = StandUpPhase::ChairBalance;

  const int steps = static_cast<int>(std::llround(cfg.duration / cfg.dt));
  SimResult out;
  out.log.reserve(steps);
  out.summary.steps = steps;

  for (int k = 0; k < steps; ++k) {
    const double t = k * cfg.dt;
    try {
      const Wrench w_hands = wrench_at(cfg.profile, t, WrenchChannel::Hands);
      const Wrench w_feet = wrench_at(cfg.profile, t, WrenchChannel::Feet);
      phase = update_phase(phase, w_hands, w_feet, cfg.thresholds);

      const DynamicsTerms terms = compute_terms(cfg.model, state);
      const Vector6d x = task_pose(cfg.model, state);
      const Vector6d xdot = terms.J * state.nu;

      // Only the hands channel acts on the plant; feet is a scripted sensor
      // signal consumed by the phase machine above.
      Eigen::VectorXd fstack = Eigen::VectorXd::Zero(terms.Jc.rows());
      fstack.segment<6>(6 * hands_slot) = w_hands;

      const double psi_dot =
          cfg.advancement
              ? psi_dot_update(xdot, curve.deriv(adv.psi), cfg.psi_dot_upper, cfg.eps_v)
              : 1.0;
      const DesiredKinematics kin = desired_kinematics(curve, adv.psi, psi_dot);
      const WrenchDecomposition dec =
          decompose(wrench_task_accel(terms, fstack), kin.xdot_d, cfg.eps_v);
      const Vector6d xddot_star = control_objective(kin, xdot, tracking, cfg.gains);
      const Eigen::VectorXd tau =
          control_torques(terms, xddot_star, fstack, cfg.mode, dec, cfg.pinv_rel_tol);
      const Eigen::VectorXd nu_dot =
          forward_dynamics(cfg.model, state, tau, {{hands_link, w_hands}});

      LogRow row;
      row.t = t;
      row.phase = static_cast<int>(phase);
      row.psi = adv.psi;
      row.psi_dot = psi_dot;
      row.x = x;
      row.x_d = kin.x_d;
      row.xdot = xdot;
      row.xdot_d = kin.xdot_d;
      row.f_hands = w_hands;
      row.f_feet = w_feet;
      row.alpha = dec.alpha;
      row.tau = tau;
      out.log.push_back(std::move(row));

      if (!std::isfinite(out.summary.time_to_goal) &&
          (x - x_goal).norm() <= kGoalTolerance) {
        out.summary.time_to_goal = t;
      }
      out.summary.max_psi_dot = std::max(out.summary.max_psi_dot, psi_dot);

      tracking = integrate_error(tracking, xdot, kin.xdot_d, cfg.dt, cfg.windup_limit);
      adv = advance(adv, psi_dot, cfg.dt);
      state = step(state, nu_dot, cfg.dt);
      if (!state.q.allFinite() || !state.nu.allFinite()) {
        throw NumericalError("state went non-finite");
      }
    } catch (const SingularityError& e) {
      throw SingularityError(step_context(k, t) + e.what(), e.sigma_min());
    } catch (const NumericalError& e) {
      throw NumericalError(step_context(k, t) + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(step_context(k, t) + e.what());
    } catch (const ContractViolation& e) {
      throw ContractViolation(step_context(k, t) + e.what());
    }
  }

  out.summary.final_psi = adv.psi;
  return out;
}

}  // namespace tadv
