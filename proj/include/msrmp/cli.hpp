#ifndef MSRMP_CLI_HPP
#define MSRMP_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace msrmp {

enum ExitCode : int { exit_ok = 0, exit_model_error = 1, exit_usage_error = 2 };

/// Runs one command. `args` excludes the program name. Documents go to `out`
/// (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msrmp

#endif  // MSRMP_CLI_HPP
