#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace volharvest::cli {

/// Runs the command line (args excludes the program name). Data goes to
/// `out` or the --output file, diagnostics to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volharvest::cli
