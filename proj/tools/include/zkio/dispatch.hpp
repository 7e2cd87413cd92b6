#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "zkio/config.hpp"

namespace zkio {

enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 1, kExitConfig = 2, kExitOutput = 3 };

// Runs the configured experiment, writes its artifacts, prints a summary.
int dispatch(const RunConfig& cfg, const std::optional<std::string>& output_dir, std::ostream& out,
             std::ostream& err);

}  // namespace zkio
