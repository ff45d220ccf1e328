#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace depcon::cli {

/// Runs the depcon command line with `args` excluding the program name and
/// returns the process exit code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace depcon::cli
