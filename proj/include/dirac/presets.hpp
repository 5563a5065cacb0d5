#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/model.hpp"

namespace dirac {

/// Bundled model sources, compiled into the binary.
std::vector<std::string> preset_names();
std::optional<std::string> preset_source(const std::string& name);

/// Parses a bundled preset; throws Error for unknown names.
LagrangianModel load_preset(const std::string& name);

} // namespace dirac
