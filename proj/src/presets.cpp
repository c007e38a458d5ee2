#include "becdecay/presets.hpp"

namespace becdecay {

namespace {

// Metastable-helium trap with equal condensate and thermal populations.
constexpr const char* kFig1 = R"(# Decaying condensate in sustained equilibrium with its thermal cloud:
# metastable helium numbers, equal initial populations.
freq_unit = Hz
freq_x = 1090
freq_y = 1090
freq_z = 115
tau_s = 35

mass_kg = 6.6464731e-27
a_m = 16e-9
chi_cm3s = 1.5e-14
xi_cm6s = 4e-27

N_C = 5e5
N_T = 5e5

mode = all
t_end_s = 6
samples = 241
profile = tf
plot = decay_fig1.svg
)";

// Same trap and rates with a four-times-larger thermal cloud.
constexpr const char* kFig2 = R"(# Decaying condensate in sustained equilibrium with its thermal cloud:
# metastable helium numbers, thermal fraction 0.8.
freq_unit = Hz
freq_x = 1090
freq_y = 1090
freq_z = 115
tau_s = 35

mass_kg = 6.6464731e-27
a_m = 16e-9
chi_cm3s = 1.5e-14
xi_cm6s = 4e-27

N_C = 5e5
N_T = 2e6

mode = all
t_end_s = 6
samples = 241
profile = tf
plot = decay_fig2.svg
)";

}  // namespace

std::vector<std::string> preset_names() { return {"fig1", "fig2"}; }

std::string preset_text(const std::string& name) {
  if (name == "fig1") return kFig1;
  if (name == "fig2") return kFig2;
  throw ConfigError("unknown preset '" + name + "' (have: fig1, fig2)");
}

RunConfig preset_config(const std::string& name) {
  return parse_config_text(preset_text(name), "<preset " + name + ">");
}

}  // namespace becdecay
