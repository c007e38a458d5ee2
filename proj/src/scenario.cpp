#include "becdecay/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "becdecay/gp.hpp"
#include "becdecay/plot.hpp"
#include "becdecay/thermal_cloud.hpp"

namespace becdecay {

namespace fs = std::filesystem;

namespace {

constexpr const char* kHeader =
    "t_s,N_C,N_T,T_K,mu_J,E_T_J,Ndot_bg,Ndot_2b,Ndot_3b";

// 17 significant digits: the shortest form that round-trips every double.
std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << kHeader << '\n';
  for (const TrajectoryPoint& p : traj.points) {
    out << num17(p.t) << ',' << num17(p.N_C) << ',' << num17(p.N_T) << ','
        << num17(p.T) << ',' << num17(p.mu) << ',' << num17(p.E_T) << ','
        << num17(p.ndot_bg) << ',' << num17(p.ndot_2b) << ','
        << num17(p.ndot_3b) << '\n';
  }
  out << "# termination: " << to_string(traj.reason) << '\n';
  if (!out) {
    throw std::runtime_error("short write on '" + path.string() + "'");
  }
}

}  // namespace

double efold_lifetime(std::span<const TrajectoryPoint> points) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (points.size() < 2 || !(points.front().N_C > 0.0)) return nan;
  const double target = points.front().N_C / std::numbers::e;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (b.N_C <= target && a.N_C > target) {
      return a.t + (target - a.N_C) * (b.t - a.t) / (b.N_C - a.N_C);
    }
  }
  return nan;
}

ScenarioResult run_scenario(const RunConfig& base, const ScenarioOptions& opt) {
  RunConfig cfg = base;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (!opt.mode.empty()) cfg.modes = parse_mode(opt.mode);
  if (!opt.profile.empty()) {
    if (opt.profile != "tf" && opt.profile != "gp") {
      throw ConfigError("profile must be tf or gp, got '" + opt.profile + "'");
    }
    cfg.profile = opt.profile;
  }

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + cfg.out_dir +
                      "': " + ec.message());
  }

  DynamicsConfig dyn;
  dyn.trap = cfg.trap;
  dyn.species = cfg.species;
  if (cfg.profile == "gp") {
    dyn.make_profile = [trap = cfg.trap, species = cfg.species](double n) {
      return gp_solve(n, trap, species);
    };
  }

  // Resolve the third initial quantity from the other two on the selected
  // backend; the profile depends only on N_C, so one profile serves the
  // whole root-find.
  ScenarioResult res;
  {
    const CondensateProfile prof0 = dyn.profile(cfg.N_C);
    QuadratureOptions quad;
    quad.rtol = dyn.quad_rtol;
    if (cfg.T_K > 0.0) {
      res.T0 = cfg.T_K;
      res.N_T0 = integrate_cloud({cfg.N_C, cfg.T_K}, prof0, quad).N_T;
    } else {
      res.T0 = solve_temperature(cfg.N_T, prof0, quad);
      res.N_T0 = cfg.N_T;
    }
  }
  const InitialState init{cfg.N_C, res.T0, res.N_T0};

  std::vector<double> grid(static_cast<std::size_t>(cfg.samples));
  for (int i = 0; i < cfg.samples; ++i) {
    grid[i] = cfg.t_end * i / (cfg.samples - 1);
  }

  std::vector<fs::path> written;
  auto cleanup = [&written]() {
    std::error_code ignore;
    for (const fs::path& p : written) fs::remove(p, ignore);
  };

  try {
    for (RunMode mode : cfg.modes) {
      ModeRun run;
      run.mode = mode;
      run.word = mode_word(mode);
      run.traj = run_trajectory(init, mode, cfg.t_end, grid, dyn);
      if (run.traj.reason == StopReason::solver_failure) {
        throw SolverError(run.word + " run failed: " + run.traj.diagnostic);
      }
      const fs::path csv = fs::path(cfg.out_dir) / (run.word + ".csv");
      written.push_back(csv);
      write_trajectory_csv(csv, run.traj);
      run.csv_path = csv.string();
      run.lifetime = efold_lifetime(run.traj.points);
      res.runs.push_back(std::move(run));
    }

    if (!cfg.plot.empty()) {
      const fs::path svg = fs::path(cfg.out_dir) / cfg.plot;
      written.push_back(svg);
      write_decay_svg(svg.string(), res.runs);
      res.plot_path = svg.string();
    }

    if (opt.lifetimes) {
      const fs::path lcsv = fs::path(cfg.out_dir) / "lifetimes.csv";
      written.push_back(lcsv);
      std::ofstream out(lcsv, std::ios::binary);
      if (!out) {
        throw std::runtime_error("cannot write '" + lcsv.string() + "'");
      }
      out << "mode,tau_e_s\n";
      for (const ModeRun& run : res.runs) {
        out << run.word << ',' << num17(run.lifetime) << '\n';
      }
      res.lifetimes_path = lcsv.string();
    }
  } catch (...) {
    cleanup();
    throw;
  }
  return res;
}

TrajectoryFile read_trajectory_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("'" + path + "' is not a trajectory CSV");
  }
  TrajectoryFile tf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string tag = "# termination: ";
      if (line.rfind(tag, 0) == 0) tf.termination = line.substr(tag.size());
      continue;
    }
    TrajectoryPoint p;
    double* fields[9] = {&p.t,  &p.N_C,     &p.N_T,     &p.T,      &p.mu,
                         &p.E_T, &p.ndot_bg, &p.ndot_2b, &p.ndot_3b};
    const char* s = line.c_str();
    char* end = nullptr;
    for (int k = 0; k < 9; ++k) {
      *fields[k] = std::strtod(s, &end);
      if (end == s || (k < 8 && *end != ',')) {
        throw std::runtime_error("malformed row in '" + path + "': " + line);
      }
      s = end + 1;
    }
    tf.points.push_back(p);
  }
  return tf;
}

}  // namespace becdecay
