#pragma once

#include <string>
#include <vector>

#include "jcpath/config.hpp"

namespace jcpath {

// Built-in scenario catalog: the survey panels shipped with the tool.
// Preset text is deterministic down to the byte, so outputs regenerate
// identically across runs and machines.

std::vector<std::string> preset_names();

// The config text of one preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

ScenarioConfig preset_config(const std::string& name);

}  // namespace jcpath
