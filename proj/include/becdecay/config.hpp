#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "becdecay/dynamics.hpp"
#include "becdecay/trap.hpp"

namespace becdecay {

// Anything wrong with a run description (file, syntax, keys, values) as
// opposed to a numerical failure while running it.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One fully validated run description, in SI units.
//
// The on-disk format is flat `key = value`, one per line, with `#` starting
// a comment and case-sensitive keys.  Keys carry their unit where one
// applies.  Unknown or duplicate keys are hard errors.
//
//   required: freq_x freq_y freq_z tau_s mass_kg a_m chi_cm3s xi_cm6s
//             N_C t_end_s samples mode
//   exactly one of: N_T | T_K
//   optional: freq_unit (Hz|rad/s, default Hz), profile (tf|gp, default
//             tf), out_dir (default "."), plot (SVG filename, default none)
//
// mode is one of full, simple, literal, pure, ideal, or all (= full +
// simple + pure).
struct RunConfig {
  TrapConfig trap;        // angular frequencies, rad/s
  SpeciesParams species;  // SI
  double N_C = 0.0;
  double N_T = -1.0;  // < 0 means "solve from T_K"
  double T_K = -1.0;  // < 0 means "solve from N_T"
  std::vector<RunMode> modes;
  double t_end = 0.0;
  int samples = 0;
  std::string out_dir = ".";
  std::string plot;  // empty: no plot written
  std::string profile = "tf";
};

// `origin` only labels error messages (a path or "<preset fig1>").
RunConfig parse_config_text(std::string_view text, std::string_view origin);
RunConfig parse_config(const std::string& path);

// CLI mode word ("simple") for a RunMode, matching the per-mode output
// file names; parse_mode accepts the same words plus "all".
std::string mode_word(RunMode m);
std::vector<RunMode> parse_mode(std::string_view word);

}  // namespace becdecay
