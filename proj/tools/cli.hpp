// Command line front end; exposed as a function so tests can drive it
// in-process.  Exit codes: 0 satisfiable / property holds, 1 unsatisfiable /
// property fails, 2 usage or input error.

#ifndef MUSAT_TOOLS_CLI_HPP
#define MUSAT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace musat::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace musat::cli

#endif  // MUSAT_TOOLS_CLI_HPP
