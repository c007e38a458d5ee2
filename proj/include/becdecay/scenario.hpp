#pragma once

#include <span>
#include <string>
#include <vector>

#include "becdecay/config.hpp"
#include "becdecay/dynamics.hpp"

namespace becdecay {

// CLI-level overrides of a parsed RunConfig; empty strings leave the config
// untouched.
struct ScenarioOptions {
  std::string out_dir;
  std::string mode;     // CLI mode word, see parse_mode
  std::string profile;  // "tf" | "gp"
  bool lifetimes = false;
};

struct ModeRun {
  RunMode mode = RunMode::full;
  std::string word;      // file-name stem, e.g. "simple"
  Trajectory traj;
  std::string csv_path;
  double lifetime = 0.0;  // e-folding time of N_C; NaN when never crossed
};

struct ScenarioResult {
  std::vector<ModeRun> runs;
  std::string plot_path;       // empty when no plot was requested
  std::string lifetimes_path;  // empty unless ScenarioOptions::lifetimes
  double T0 = 0.0;             // resolved initial temperature
  double N_T0 = 0.0;           // resolved initial thermal count
};

// Runs every requested mode sequentially (fixed order, so stateful profile
// backends stay reproducible), writes one CSV per mode with the trailing
// `# termination: <reason>` comment, and optionally the SVG plot and the
// lifetime summary.  On any failure all files written by this call are
// removed before the exception propagates; a trajectory that ends in
// StopReason::solver_failure counts as a failure.
ScenarioResult run_scenario(const RunConfig& cfg,
                            const ScenarioOptions& opt = {});

// Time at which N_C first falls to N_C(0)/e, linearly interpolated between
// samples; NaN when the trajectory never gets there.
double efold_lifetime(std::span<const TrajectoryPoint> points);

// Reader for the emitted trajectory CSV (17-significant-digit round trip).
struct TrajectoryFile {
  std::vector<TrajectoryPoint> points;
  std::string termination;
};
TrajectoryFile read_trajectory_csv(const std::string& path);

}  // namespace becdecay
