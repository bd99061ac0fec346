#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mproj {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitConfig = 3 };

// Runs the command line `args` (without the program name). Reports go to
// `out` or the --out file, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mproj
