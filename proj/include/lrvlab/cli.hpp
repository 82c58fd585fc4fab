#ifndef LRVLAB_CLI_HPP
#define LRVLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lrvlab::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2 };

/// Runs the command line front end. Results go to `out` (or --out), reports
/// and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same with argv[1..] given as a vector.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lrvlab::cli

#endif
