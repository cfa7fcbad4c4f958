#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "grf/json_io.hpp"
#include "grf/montecarlo.hpp"

namespace grf::app {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidationFailed = 2 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --output names a file, which is then replaced atomically.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Report of the `counterexample` subcommand.
io::json counterexample_report(const std::vector<int>& n_values, const McOptions& opts);

/// Serializes a report. Tabular reports carry their rows under "rows"; CSV
/// output writes those rows with the keys of the first row as header.
std::string render(const io::json& report, bool csv);

}  // namespace grf::app
