#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace radium::cli {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` excludes the program name. Results go to the
/// --out file (with a manifest sidecar) or to `out` when no file is given;
/// the one-line summary goes to `out` (or `err` when `out` carries the table).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radium::cli
