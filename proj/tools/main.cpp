#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tadv/config.hpp"
#include "tadv/errors.hpp"
#include "tadv/log_io.hpp"
#include "tadv/sim.hpp"

namespace {

using namespace tadv;

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::string advancement;  // "", "on", "off"
  std::string mode;         // "", "cancel-all", "retain-helpful"
  double duration = -1.0;
};

SimConfig make_config(const RunOptions& opt) {
  SimConfig cfg = opt.config_path.empty() ? default_standup_config()
                                          : load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.advancement == "on") cfg.advancement = true;
  if (opt.advancement == "off") cfg.advancement = false;
  if (opt.mode == "cancel-all") cfg.mode = ControlMode::CancelAll;
  if (opt.mode == "retain-helpful") cfg.mode = ControlMode::RetainHelpful;
  if (opt.duration > 0.0) cfg.duration = opt.duration;
  cfg.validate();
  return cfg;
}

std::string fmt_time(double t) {
  if (!std::isfinite(t)) return "never";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f s", t);
  return buf;
}

void print_summary(const std::string& label, const SimResult& res) {
  std::printf("%-12s steps=%d  final_psi=%.4f  max_psi_dot=%.4f  goal=%s  phase=%d\n",
              label.c_str(), res.summary.steps, res.summary.final_psi,
              res.summary.max_psi_dot, fmt_time(res.summary.time_to_goal).c_str(),
              res.log.empty() ? 1 : res.log.back().phase);
}

int do_run(const RunOptions& opt) {
  const SimConfig cfg = make_config(opt);
  const ParamCurve curve = build_curve(cfg.waypoints);
  const SimResult res = run_simulation(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_csv(res.log, cfg.out_dir + "/run.csv", cfg.model.dim());
  write_plots(res.log, curve, cfg.out_dir);
  print_summary("run:", res);
  std::printf("wrote %s/run.csv and four svg figures\n", cfg.out_dir.c_str());
  return 0;
}

int do_compare(const RunOptions& opt) {
  const SimConfig assisted = make_config(opt);
  SimConfig unassisted = assisted;
  unassisted.profile.pulses.clear();
  for (const WrenchPulse& p : assisted.profile.pulses) {
    if (p.channel != WrenchChannel::Hands) unassisted.profile.pulses.push_back(p);
  }

  auto baseline = std::async(std::launch::async,
                             [&unassisted] { return run_simulation(unassisted); });
  const SimResult a = run_simulation(assisted);
  const SimResult u = baseline.get();

  std::filesystem::create_directories(assisted.out_dir);
  write_csv(a.log, assisted.out_dir + "/assisted.csv", assisted.model.dim());
  write_csv(u.log, assisted.out_dir + "/unassisted.csv", assisted.model.dim());

  print_summary("assisted:", a);
  print_summary("unassisted:", u);
  if (std::isfinite(a.summary.time_to_goal) && std::isfinite(u.summary.time_to_goal)) {
    std::printf("goal reached %.3f s earlier with assistance\n",
                u.summary.time_to_goal - a.summary.time_to_goal);
  }
  std::printf("psi advance at end: %+.4f\n",
              a.summary.final_psi - u.summary.final_psi);
  return 0;
}

int do_validate(const std::string& path) {
  const SimConfig cfg = load_config(path);
  std::printf("config ok: %d dof model, %zu waypoints, %zu pulses, %.3f s at dt=%g\n",
              cfg.model.dim(), cfg.waypoints.size(), cfg.profile.pulses.size(),
              cfg.duration, cfg.dt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory advancement workbench"};
  app.require_subcommand(1);

  RunOptions opt;
  const auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path,
                    "JSON run configuration (omit for the built-in stand-up run)");
    cmd->add_option("--out", opt.out_dir, "Output directory override");
    cmd->add_option("--advancement", opt.advancement,
                    "Override the parameter update law")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--mode", opt.mode, "Wrench handling mode override")
        ->check(CLI::IsMember({"cancel-all", "retain-helpful"}));
    cmd->add_option("--duration", opt.duration, "Duration override in seconds");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one run, write csv and figures");
  add_common(run_cmd);
  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "Run with and without hands assistance, report the difference");
  add_common(cmp_cmd);

  std::string validate_path;
  CLI::App* val_cmd = app.add_subcommand("validate-config", "Check a config file");
  val_cmd->add_option("--config", validate_path, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(opt);
    if (cmp_cmd->parsed()) return do_compare(opt);
    if (val_cmd->parsed()) return do_validate(validate_path);
  } catch (const SingularityError& e) {
    std::cerr << "singularity: " << e.what() << " (sigma_min=" << e.sigma_min()
              << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
