#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symdyn::cli {

// Parses args (no program name) and runs the selected subcommand, writing
// results to out and diagnostics to err. Returns the process exit code:
// 0 success, 1 domain error, 2 usage error, 3 resource cap.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace symdyn::cli
