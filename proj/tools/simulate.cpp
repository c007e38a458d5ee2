// Command-line front end: runs one scenario (from a config file or a named
// preset), writes per-mode trajectory CSVs, and optionally an SVG plot and a
// lifetime summary.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "becdecay/config.hpp"
#include "becdecay/presets.hpp"
#include "becdecay/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Decay of a trapped condensate in sustained thermal equilibrium "
      "with its thermal cloud"};
  app.get_formatter()->column_width(30);

  std::string config_path, preset, mode, out_dir, profile;
  bool lifetimes = false;

  auto* opt_config =
      app.add_option("--config", config_path, "flat key=value config file")
          ->option_text("PATH");
  auto* opt_preset =
      app.add_option("--preset", preset, "built-in scenario (fig1, fig2)")
          ->check(CLI::IsMember(becdecay::preset_names()))
          ->option_text("NAME");
  opt_config->excludes(opt_preset);
  opt_preset->excludes(opt_config);
  app.add_option("--mode", mode,
                 "override the configured model selection: full, simple, "
                 "literal, pure, ideal, or all")
      ->option_text("WORD");
  app.add_option("--out", out_dir, "override the output directory")
      ->option_text("DIR");
  app.add_flag("--lifetime", lifetimes,
               "also write lifetimes.csv (e-folding time per mode)");
  app.add_option("--profile", profile,
                 "override the condensate profile backend: tf | gp")
      ->option_text("WORD");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits cleanly; bad usage is exit 2
  }

  if (config_path.empty() == preset.empty()) {
    std::fprintf(stderr,
                 "config error: exactly one of --config or --preset is "
                 "required (see --help)\n");
    return 2;
  }

  try {
    const becdecay::RunConfig cfg = config_path.empty()
                                        ? becdecay::preset_config(preset)
                                        : becdecay::parse_config(config_path);
    becdecay::ScenarioOptions opt;
    opt.out_dir = out_dir;
    opt.mode = mode;
    opt.profile = profile;
    opt.lifetimes = lifetimes;

    const becdecay::ScenarioResult res = becdecay::run_scenario(cfg, opt);

    std::printf("initial state: T = %.6g K, N_T = %.6g atoms\n", res.T0,
                res.N_T0);
    for (const auto& r : res.runs) {
      std::printf("%-8s %-21s t_stop = %9.4f s", r.word.c_str(),
                  becdecay::to_string(r.traj.reason), r.traj.t_stop);
      if (std::isnan(r.lifetime)) {
        std::printf("   tau_e =       n/a");
      } else {
        std::printf("   tau_e = %9.4f s", r.lifetime);
      }
      std::printf("   -> %s\n", r.csv_path.c_str());
    }
    if (!res.plot_path.empty()) {
      std::printf("plot     -> %s\n", res.plot_path.c_str());
    }
    if (!res.lifetimes_path.empty()) {
      std::printf("lifetimes-> %s\n", res.lifetimes_path.c_str());
    }
    return 0;
  } catch (const becdecay::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
