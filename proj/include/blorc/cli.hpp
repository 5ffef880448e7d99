#pragma once

#include <string>
#include <vector>

namespace blorc::cli {

// Entry point shared by the blorc executable and the tests. args[0] is the
// program name. Returns the process exit code: 0 on success, 1 when a command
// fails at run time, 2 for usage or configuration errors.
int run(const std::vector<std::string>& args);

}  // namespace blorc::cli
