#pragma once

#include <string>
#include <vector>

namespace hsde {

enum ExitCode { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_resource = 4 };

// Entry point of the `hsde` tool; args exclude the program name. Errors are
// reported on stderr as one JSON object {"error": kind, "message": text}.
int run_command(const std::vector<std::string>& args);

}  // namespace hsde
