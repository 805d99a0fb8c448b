#include "tadv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tadv/errors.hpp"

namespace tadv {

void validate_thresholds(const Thresholds& th) {
  if (!(th.hands_start > 0.0) || !(th.feet_s3 > 0.0) || !(th.feet_s4 > 0.0)) {
    throw ConfigError("thresholds must be positive");
  }
  if (th.feet_s4 < th.feet_s3) {
    throw ConfigError("thresholds: feet_s4 must be >= feet_s3");
  }
}

void validate_profile(const WrenchProfile& profile) {
  std::map<WrenchChannel, std::vector<std::pair<double, double>>> spans;
  for (const auto& p : profile.pulses) {
    if (!std::isfinite(p.t_start) || !std::isfinite(p.t_end) || p.t_start < 0.0 ||
        !(p.t_end > p.t_start)) {
      throw ConfigError("pulse: need 0 <= t_start < t_end");
    }
    if (!(p.ramp >= 0.0) || !std::isfinite(p.ramp)) {
      throw ConfigError("pulse: ramp must be >= 0");
    }
    if (!p.wrench.allFinite()) {
      throw ConfigError("pulse: non-finite wrench");
    }
    spans[p.channel].emplace_back(p.t_start, p.t_end);
  }
  for (auto& [channel, list] : spans) {
    std::sort(list.begin(), list.end());
    for (size_t i = 1; i < list.size(); ++i) {
      if (list[i].first < list[i - 1].second) {
        throw ConfigError("pulses on one channel must not overlap");
      }
    }
  }
}

Wrench wrench_at(const WrenchProfile& profile, double t, WrenchChannel channel) {
  if (!(t >= 0.0)) {
    throw ContractViolation("wrench_at: t must be >= 0");
  }
  Wrench w = Wrench::Zero();
  for (const auto& p : profile.pulses) {
    if (p.channel != channel || t < p.t_start || t > p.t_end) continue;
    double scale = 1.0;
    if (p.ramp > 0.0) {
      scale = std::min({(t - p.t_start) / p.ramp, (p.t_end - t) / p.ramp, 1.0});
    }
    w += scale * p.wrench;
  }
  return w;
}

StandUpPhase update_phase(StandUpPhase phase, const Wrench& hands_w,
                          const Wrench& feet_w, const Thresholds& th) {
  if (!hands_w.allFinite() || !feet_w.allFinite()) {
    throw ContractViolation("update_phase: non-finite wrench");
  }
  validate_thresholds(th);

  // The machine keys on force magnitudes only; moments carry no intent here.
  const double hands_force = hands_w.head<3>().norm();
  const double feet_force = feet_w.head<3>().norm();

  switch (phase) {
    case StandUpPhase::ChairBalance:
      return hands_force >= th.hands_start ? StandUpPhase::ComForward
                                           : StandUpPhase::ChairBalance;
    case StandUpPhase::ComForward:
      return feet_force >= th.feet_s3 ? StandUpPhase::ComForwardUp
                                      : StandUpPhase::ComForward;
    case StandUpPhase::ComForwardUp:
      return feet_force >= th.feet_s4 ? StandUpPhase::FullErect
                                      : StandUpPhase::ComForwardUp;
    case StandUpPhase::FullErect:
      return StandUpPhase::FullErect;
  }
  throw ContractViolation("update_phase: invalid phase value");
}

StandUpWaypoints StandUpWaypoints::defaults() {
  StandUpWaypoints wp;
  wp.seated << 0.0, 0.0, 0.4, 0.0, 0.0, 0.0;
  wp.forward << 0.1, 0.0, 0.4, 0.0, 0.0, 0.0;
  wp.forward_up << 0.15, 0.0, 0.55, 0.0, 0.0, 0.0;
  wp.erect << 0.15, 0.0, 0.65, 0.0, 0.0, 0.0;
  wp.durations = {2.0, 2.0, 2.0};
  return wp;
}

ParamCurve build_standup_reference(const StandUpWaypoints& wp) {
  for (double d : wp.durations) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ContractViolation("stand-up reference: durations must be positive");
    }
  }
  // The motion must first travel forward, then forward and up, then up.
  if (!(wp.forward(0) > wp.seated(0))) {
    throw ContractViolation("stand-up reference: forward pose must move +x from seated");
  }
  if (!(wp.forward_up(0) >= wp.forward(0)) || !(wp.forward_up(2) > wp.forward(2))) {
    throw ContractViolation("stand-up reference: forward_up pose must not retreat in x and must rise");
  }
  if (!(wp.erect(2) > wp.forward_up(2))) {
    throw ContractViolation("stand-up reference: erect pose must rise from forward_up");
  }

  std::vector<Waypoint> pts(4);
  pts[0] = {0.0, wp.seated};
  pts[1] = {wp.durations[0], wp.forward};
  pts[2] = {wp.durations[0] + wp.durations[1], wp.forward_up};
  pts[3] = {wp.durations[0] + wp.durations[1] + wp.durations[2], wp.erect};
  return build_curve(pts);
}

}  // namespace tadv
