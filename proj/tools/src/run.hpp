#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polaronlab::cli {

enum ExitCode : int { ok = 0, input_error = 2, numerical_failure = 3 };

/// Full command-line entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polaronlab::cli
