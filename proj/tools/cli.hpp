#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polybilliard::cli {

enum ExitCode { kOk = 0, kInputError = 1, kNoRegularTrajectory = 2, kVerificationFailed = 3 };

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polybilliard::cli
