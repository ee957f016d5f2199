#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdual::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3 };

/// Runs one invocation. CSV goes to `out` unless --out names a file; diagnostics and
/// summary lines go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fracdual::cli
