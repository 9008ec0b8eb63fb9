#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctower {

// Runs the command line `args` (without the program name). Returns the exit
// status: 0 on success, 1 for computation errors, 2 for usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctower
