#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matprop::cli {

enum ExitCode : int { Positive = 0, Negative = 1, UsageError = 2, ParseFailure = 3, ResourceExceeded = 4 };

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits a comma list of matrix arguments, ignoring commas inside brackets.
std::vector<std::string> split_matrix_list(const std::string& text);

}  // namespace matprop::cli
