#pragma once

#include <string>

#include "ftn/sim.hpp"

namespace ftn {

// Sectioned key=value text; '#' and ';' start comments. Unknown sections or
// keys raise ParseError with the line number. `origin` names the source in
// errors and anchors relative table paths.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

RunConfig load_config(const std::string& path);

}  // namespace ftn
