#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdl {

/// Runs the command-line tool on args (without the program name).
/// Returns 0 on success, 1 on a domain failure, 2 on a usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdl
