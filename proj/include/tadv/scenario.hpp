#pragma once

#include <array>
#include <vector>

#include "tadv/trajectory.hpp"
#include "tadv/types.hpp"

namespace tadv {

// Sit-to-stand phases, advanced one transition per update:
//   ChairBalance -> ComForward      when |hands force| >= hands_start
//   ComForward   -> ComForwardUp    when |feet force| >= feet_s3
//   ComForwardUp -> FullErect       when |feet force| >= feet_s4
// FullErect is absorbing. Thresholds compare the force part only and are
// inclusive.
enum class StandUpPhase : int {
  ChairBalance = 1,
  ComForward = 2,
  ComForwardUp = 3,
  FullErect = 4,
};

struct Thresholds {
  double hands_start = 5.0;  // N
  double feet_s3 = 20.0;
  double feet_s4 = 40.0;
};
void validate_thresholds(const Thresholds& th);

enum class WrenchChannel { Hands, Feet };

// One scripted pulse: zero outside [t_start, t_end], the full wrench inside,
// with linear ramps of length `ramp` at both edges.
struct WrenchPulse {
  double t_start = 0.0;
  double t_end = 0.0;
  double ramp = 0.0;
  WrenchChannel channel = WrenchChannel::Hands;
  Wrench wrench = Wrench::Zero();
};

struct WrenchProfile {
  std::vector<WrenchPulse> pulses;
};

// Pulses on one channel must not overlap (shared endpoints are allowed).
void validate_profile(const WrenchProfile& profile);

Wrench wrench_at(const WrenchProfile& profile, double t, WrenchChannel channel);

StandUpPhase update_phase(StandUpPhase phase, const Wrench& hands_w,
                          const Wrench& feet_w, const Thresholds& th);

// CoM keyframes of the stand-up motion and the nominal duration of each
// segment (seated->forward, forward->forward_up, forward_up->erect).
struct StandUpWaypoints {
  Vector6d seated = Vector6d::Zero();
  Vector6d forward = Vector6d::Zero();
  Vector6d forward_up = Vector6d::Zero();
  Vector6d erect = Vector6d::Zero();
  std::array<double, 3> durations = {2.0, 2.0, 2.0};

  static StandUpWaypoints defaults();
};

// Single curve through the four keyframes with knots at the cumulative
// nominal times, so psi_dot = 1 plays the motion back at nominal speed.
// Requires forward progress in x for the first segment, x and z for the
// second, z for the third.
ParamCurve build_standup_reference(const StandUpWaypoints& wp);

}  // namespace tadv
