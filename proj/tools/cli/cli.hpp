#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shadowtrack::cli {

/// Runs one subcommand. Data goes to the --out files, summaries to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shadowtrack::cli
