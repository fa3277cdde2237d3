#ifndef SEMICOMP_CLI_HPP
#define SEMICOMP_CLI_HPP

#include <iosfwd>

namespace semicomp {

/// Exit codes: 0 success, 1 input/config/I-O failure, 2 fit did not converge (report still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Entry point of the `semicomp` command (subcommands fit, simulate, mc, tau).
/// Normal output goes to out, diagnostics to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semicomp

#endif  // SEMICOMP_CLI_HPP
