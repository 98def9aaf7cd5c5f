#pragma once

#include <string>
#include <vector>

namespace typedcrf {

// Runs the command-line harness. Returns the process exit code: 0 on success,
// nonzero with a one-line diagnostic on stderr otherwise.
int run_cli(const std::vector<std::string>& args);

}  // namespace typedcrf
