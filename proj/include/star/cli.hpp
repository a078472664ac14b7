#pragma once

#include <string>
#include <vector>

namespace star {

/// Runs the command-line front end. Exit codes: 0 success, 1 usage error,
/// 2 input parse/content error, 3 deadlock abort.
int run_cli(const std::vector<std::string>& args);

}  // namespace star
