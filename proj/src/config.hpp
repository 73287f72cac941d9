#pragma once

#include <string>

#include "cloaksim.hpp"

namespace tdnrbc {

// Flat key=value scenario configuration ('#' comments, blank lines ignored).
// Unknown keys are errors; an empty file yields the section-4 default
// scenario.  cloak.R1 == cloak.R2 disables the cloaking layer.
Scenario parse_config_text(const std::string& text);
Scenario parse_config_file(const std::string& path);

}  // namespace tdnrbc
