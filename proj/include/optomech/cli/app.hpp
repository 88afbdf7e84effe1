#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optomech::cli {

enum ExitCode : int { success = 0, config_error = 2, not_converged = 3 };

/// The optomech command line. args excludes the program name. CSV goes to
/// <out>.csv and metadata to <out>.json, or the CSV to `out` when --out is
/// not given. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optomech::cli
