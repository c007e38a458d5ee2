#pragma once

#include <string>
#include <utility>
#include <vector>

#include "becdecay/scenario.hpp"

namespace becdecay {

// Static SVG of the condensate decay: one N_C(t) curve per mode (full
// solid, simple dashed, pure dotted, literal dash-dot, ideal long-dash)
// with a temperature inset taken from the full-model run when present.
// Pure text emission; no display or toolkit dependency.
void write_decay_svg(const std::string& path,
                     const std::vector<ModeRun>& runs);

}  // namespace becdecay
