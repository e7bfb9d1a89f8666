#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwdp {

/// Command-line front end. `args` is argv without the program name.
/// Results go to `out`, diagnostics to `err`. Returns the process exit
/// code: 0 success, 1 negative solver outcome (infeasible, failed
/// extraction, no cover), 2 input or usage error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace mwdp
