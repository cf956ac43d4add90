#pragma once

#include <string>
#include <vector>

namespace qmse {

// Runs one CLI invocation. `args` excludes the program name. Returns the
// process exit code: 0 iff the command succeeded. Data goes to stdout (or
// the file named by --out); diagnostics go to stderr. With --error-json a
// failure also prints {"error": kind, "message": ...} to stdout.
int cli_run(const std::vector<std::string>& args);

} // namespace qmse
