#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace masmc::cli {

// Runs one command (`run`, `probe`, `figures`, `selfcheck`) against the given
// streams. `args` excludes the program name. Returns the process exit code:
// 0 success/accepted, 1 usage-or-config error, 2 protocol rejection or a
// failed statistical check.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace masmc::cli
