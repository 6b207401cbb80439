#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nsg::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int { kPass = 0, kContractViolation = 1, kUsage = 2, kIo = 3 };

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsg::cli
