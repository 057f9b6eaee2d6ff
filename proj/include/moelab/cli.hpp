#pragma once

#include <string>
#include <vector>

namespace moelab {

/// Exit codes: 0 pass, 1 internal error, 2 usage error, 3 resource guard.
int run_cli(const std::vector<std::string>& arguments);
int run_cli(int argc, char** argv);

}  // namespace moelab
