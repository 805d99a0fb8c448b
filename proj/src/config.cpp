#include "tadv/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "tadv/errors.hpp"

namespace tadv {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(where + ": expected an object");
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

double get_num(const json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ConfigError(where + ": expected a number");
  }
  return j.get<double>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) {
    throw ConfigError(where + ": expected a boolean");
  }
  return j.get<bool>();
}

std::string get_str(const json& j, const std::string& where) {
  if (!j.is_string()) {
    throw ConfigError(where + ": expected a string");
  }
  return j.get<std::string>();
}

Vector6d get_vec6(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 6) {
    throw ConfigError(where + ": expected an array of 6 numbers");
  }
  Vector6d v;
  for (int i = 0; i < 6; ++i) v(i) = get_num(j[i], where);
  return v;
}

std::array<double, 3> get_arr3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where + ": expected an array of 3 numbers");
  }
  std::array<double, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = get_num(j[i], where);
  return a;
}

Eigen::VectorXd get_vecn(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a non-empty array of numbers");
  }
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = get_num(j[i], where);
  return v;
}

RobotModel parse_model(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("model: missing 'kind'");
  }
  const std::string kind = get_str(j.at("kind"), "model.kind");
  RobotModel m;
  if (kind == "cartesian-mass") {
    check_keys(j, "model", {"kind", "mass", "rot_inertia", "gravity"});
    if (!j.contains("mass")) throw ConfigError("model: cartesian-mass needs 'mass'");
    Eigen::Vector3d inertia = Eigen::Vector3d::Ones();
    if (j.contains("rot_inertia")) {
      const auto a = get_arr3(j.at("rot_inertia"), "model.rot_inertia");
      inertia << a[0], a[1], a[2];
    }
    const double g = j.contains("gravity") ? get_num(j.at("gravity"), "model.gravity") : 9.81;
    m = RobotModel::cartesian_mass(get_num(j.at("mass"), "model.mass"), inertia, g);
  } else if (kind == "planar-3link") {
    check_keys(j, "model",
               {"kind", "masses", "lengths", "inertias", "gravity", "task_link",
                "contact_links"});
    if (!j.contains("masses") || !j.contains("lengths")) {
      throw ConfigError("model: planar-3link needs 'masses' and 'lengths'");
    }
    const auto masses = get_arr3(j.at("masses"), "model.masses");
    const auto lengths = get_arr3(j.at("lengths"), "model.lengths");
    const double g = j.contains("gravity") ? get_num(j.at("gravity"), "model.gravity") : 9.81;
    if (j.contains("inertias")) {
      m = RobotModel::planar_3link(masses, lengths,
                                   get_arr3(j.at("inertias"), "model.inertias"), g);
    } else {
      m = RobotModel::planar_3link_rods(masses, lengths, g);
    }
    if (j.contains("task_link")) {
      m.task_link = get_str(j.at("task_link"), "model.task_link");
    }
    if (j.contains("contact_links")) {
      const json& links = j.at("contact_links");
      if (!links.is_array() || links.empty()) {
        throw ConfigError("model.contact_links: expected a non-empty array");
      }
      m.contact_links.clear();
      for (const auto& l : links) {
        m.contact_links.push_back(get_str(l, "model.contact_links"));
      }
    }
    m.validate();
  } else {
    throw ConfigError("model.kind: expected 'cartesian-mass' or 'planar-3link'");
  }
  return m;
}

Matrix6d parse_gain(const json& j, const std::string& where) {
  if (j.is_number()) {
    return Matrix6d::Identity() * j.get<double>();
  }
  if (j.is_array() && j.size() == 6) {
    Vector6d d = get_vec6(j, where);
    return d.asDiagonal();
  }
  throw ConfigError(where + ": expected a scalar or an array of 6 diagonal entries");
}

std::vector<Waypoint> parse_curve(const json& j) {
  check_keys(j, "curve", {"waypoints", "standup"});
  if (j.contains("waypoints") == j.contains("standup")) {
    throw ConfigError("curve: give exactly one of 'waypoints' or 'standup'");
  }
  if (j.contains("waypoints")) {
    const json& rows = j.at("waypoints");
    if (!rows.is_array() || rows.size() < 2) {
      throw ConfigError("curve.waypoints: expected at least two rows");
    }
    std::vector<Waypoint> wps;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != 7) {
        throw ConfigError("curve.waypoints: each row is [psi, 6 pose values]");
      }
      Waypoint wp;
      wp.psi = get_num(row[0], "curve.waypoints");
      for (int i = 0; i < 6; ++i) wp.pose(i) = get_num(row[i + 1], "curve.waypoints");
      wps.push_back(wp);
    }
    return wps;
  }
  const json& su = j.at("standup");
  check_keys(su, "curve.standup",
             {"seated", "forward", "forward_up", "erect", "durations"});
  StandUpWaypoints wp = StandUpWaypoints::defaults();
  if (su.contains("seated")) wp.seated = get_vec6(su.at("seated"), "curve.standup.seated");
  if (su.contains("forward")) wp.forward = get_vec6(su.at("forward"), "curve.standup.forward");
  if (su.contains("forward_up")) {
    wp.forward_up = get_vec6(su.at("forward_up"), "curve.standup.forward_up");
  }
  if (su.contains("erect")) wp.erect = get_vec6(su.at("erect"), "curve.standup.erect");
  if (su.contains("durations")) {
    wp.durations = get_arr3(su.at("durations"), "curve.standup.durations");
  }
  return build_standup_reference(wp).waypoints();
}

WrenchProfile parse_profile(const json& j) {
  WrenchProfile profile;
  if (!j.is_array()) {
    throw ConfigError("scenario.pulses: expected an array");
  }
  for (const auto& p : j) {
    check_keys(p, "scenario.pulses[]", {"channel", "t_start", "t_end", "ramp", "wrench"});
    for (const char* req : {"channel", "t_start", "t_end", "wrench"}) {
      if (!p.contains(req)) {
        throw ConfigError(std::string("scenario.pulses[]: missing '") + req + "'");
      }
    }
    WrenchPulse pulse;
    const std::string channel = get_str(p.at("channel"), "scenario.pulses[].channel");
    if (channel == "hands") {
      pulse.channel = WrenchChannel::Hands;
    } else if (channel == "feet") {
      pulse.channel = WrenchChannel::Feet;
    } else {
      throw ConfigError("scenario.pulses[].channel: expected 'hands' or 'feet'");
    }
    pulse.t_start = get_num(p.at("t_start"), "scenario.pulses[].t_start");
    pulse.t_end = get_num(p.at("t_end"), "scenario.pulses[].t_end");
    if (p.contains("ramp")) pulse.ramp = get_num(p.at("ramp"), "scenario.pulses[].ramp");
    pulse.wrench = get_vec6(p.at("wrench"), "scenario.pulses[].wrench");
    profile.pulses.push_back(pulse);
  }
  return profile;
}

SimConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"model", "curve", "gains", "controller", "advancement", "scenario", "sim"});
  if (!j.contains("model") || !j.contains("curve")) {
    throw ConfigError("config: 'model' and 'curve' are required");
  }

  SimConfig cfg;
  cfg.model = parse_model(j.at("model"));
  cfg.waypoints = parse_curve(j.at("curve"));

  if (j.contains("gains")) {
    const json& g = j.at("gains");
    check_keys(g, "gains", {"kp", "kd"});
    if (g.contains("kp")) cfg.gains.Kp = parse_gain(g.at("kp"), "gains.kp");
    if (g.contains("kd")) cfg.gains.Kd = parse_gain(g.at("kd"), "gains.kd");
  }

  if (j.contains("controller")) {
    const json& c = j.at("controller");
    check_keys(c, "controller", {"mode", "pinv_rel_tol", "windup_limit"});
    if (c.contains("mode")) {
      const std::string mode = get_str(c.at("mode"), "controller.mode");
      if (mode == "cancel-all") {
        cfg.mode = ControlMode::CancelAll;
      } else if (mode == "retain-helpful") {
        cfg.mode = ControlMode::RetainHelpful;
      } else {
        throw ConfigError("controller.mode: expected 'cancel-all' or 'retain-helpful'");
      }
    }
    if (c.contains("pinv_rel_tol")) {
      cfg.pinv_rel_tol = get_num(c.at("pinv_rel_tol"), "controller.pinv_rel_tol");
    }
    if (c.contains("windup_limit")) {
      cfg.windup_limit = get_num(c.at("windup_limit"), "controller.windup_limit");
    }
  }

  if (j.contains("advancement")) {
    const json& a = j.at("advancement");
    check_keys(a, "advancement", {"enabled", "psi_dot_upper", "eps_v"});
    if (a.contains("enabled")) cfg.advancement = get_bool(a.at("enabled"), "advancement.enabled");
    if (a.contains("psi_dot_upper")) {
      cfg.psi_dot_upper = get_num(a.at("psi_dot_upper"), "advancement.psi_dot_upper");
    }
    if (a.contains("eps_v")) cfg.eps_v = get_num(a.at("eps_v"), "advancement.eps_v");
  }

  if (j.contains("scenario")) {
    const json& s = j.at("scenario");
    check_keys(s, "scenario", {"thresholds", "pulses"});
    if (s.contains("thresholds")) {
      const json& th = s.at("thresholds");
      check_keys(th, "scenario.thresholds", {"hands_start", "feet_s3", "feet_s4"});
      if (th.contains("hands_start")) {
        cfg.thresholds.hands_start = get_num(th.at("hands_start"), "scenario.thresholds.hands_start");
      }
      if (th.contains("feet_s3")) {
        cfg.thresholds.feet_s3 = get_num(th.at("feet_s3"), "scenario.thresholds.feet_s3");
      }
      if (th.contains("feet_s4")) {
        cfg.thresholds.feet_s4 = get_num(th.at("feet_s4"), "scenario.thresholds.feet_s4");
      }
    }
    if (s.contains("pulses")) cfg.profile = parse_profile(s.at("pulses"));
  }

  if (j.contains("sim")) {
    const json& s = j.at("sim");
    check_keys(s, "sim",
               {"dt", "duration", "out_dir", "hands_apply_link", "initial_q", "initial_nu"});
    if (s.contains("dt")) cfg.dt = get_num(s.at("dt"), "sim.dt");
    if (s.contains("duration")) cfg.duration = get_num(s.at("duration"), "sim.duration");
    if (s.contains("out_dir")) cfg.out_dir = get_str(s.at("out_dir"), "sim.out_dir");
    if (s.contains("hands_apply_link")) {
      cfg.hands_apply_link = get_str(s.at("hands_apply_link"), "sim.hands_apply_link");
    }
    if (s.contains("initial_q")) cfg.initial_q = get_vecn(s.at("initial_q"), "sim.initial_q");
    if (s.contains("initial_nu")) cfg.initial_nu = get_vecn(s.at("initial_nu"), "sim.initial_nu");
  }

  return cfg;
}

}  // namespace

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    SimConfig cfg = parse_config(j);
    cfg.validate();
    return cfg;
  } catch (const ContractViolation& e) {
    // Bad values inside an otherwise well-formed file are configuration
    // errors from the caller's point of view.
    throw ConfigError(e.what());
  }
}

SimConfig default_standup_config() {
  SimConfig cfg;
  cfg.model = RobotModel::cartesian_mass(5.0, Eigen::Vector3d::Ones(), 9.81);
  cfg.waypoints = build_standup_reference(StandUpWaypoints::defaults()).waypoints();
  cfg.gains = Gains::diagonal(25.0, 10.0);
  cfg.mode = ControlMode::RetainHelpful;
  cfg.advancement = true;
  cfg.psi_dot_upper = 2.0;
  cfg.dt = 1e-3;
  cfg.duration = 8.0;

  // Assistance: a diagonal forward-and-up pull on the hands for two seconds.
  WrenchPulse hands;
  hands.channel = WrenchChannel::Hands;
  hands.t_start = 1.0;
  hands.t_end = 3.0;
  hands.ramp = 0.1;
  const double f = 10.0 / std::sqrt(2.0);
  hands.wrench << f, 0.0, f, 0.0, 0.0, 0.0;

  // Scripted ground reaction ramp that walks the phase machine through the
  // feet thresholds.
  WrenchPulse feet;
  feet.channel = WrenchChannel::Feet;
  feet.t_start = 2.0;
  feet.t_end = 8.0;
  feet.ramp = 3.0;
  feet.wrench << 0.0, 0.0, 60.0, 0.0, 0.0, 0.0;

  cfg.profile.pulses = {hands, feet};
  return cfg;
}

}  // namespace tadv
