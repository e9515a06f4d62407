#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace feathom::cli {

/// Runs the command line `args` (args[0] is the program name). Returns 0 on
/// success, 1 on domain or structure errors (one diagnostic line on `err`)
/// and 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace feathom::cli
