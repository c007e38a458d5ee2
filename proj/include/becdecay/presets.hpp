#pragma once

#include <string>
#include <vector>

#include "becdecay/config.hpp"

namespace becdecay {

// Built-in scenarios, compiled in so `--preset` needs no data files.  The
// same text ships as presets/<name>.cfg for editing and as format
// documentation.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);  // ConfigError if unknown
RunConfig preset_config(const std::string& name);

}  // namespace becdecay
