#ifndef NSC_CLI_HPP_
#define NSC_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace nsc {

/// Exit statuses of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_invalid = 1, exit_io = 2 };

/// Entry point of the `nsc` tool. `args[0]` is the program name.
///
/// Subcommands: synth, train, predict, cv, tune, bench, srd. Option values
/// not given on the command line are taken from `SC_<OPTION>` environment
/// variables, then from the `--config=FILE` key=value file.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace nsc

#endif  // NSC_CLI_HPP_
