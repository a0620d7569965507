#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace recourse {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitModel = 3,
  kExitInfeasible = 4,
};

// args excludes the program name, e.g. {"bounds", "--model", "m.json", ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace recourse
