// Batch entry point: verification commands producing machine-readable reports.

#ifndef STOKESBGG_CLI_HPP
#define STOKESBGG_CLI_HPP

#include <string>
#include <vector>

namespace stokesbgg {

/// Runs one CLI invocation; returns the process exit status (0 iff every
/// check passed or was certified).
int run_cli(const std::vector<std::string>& args, std::string* captured_output = nullptr);

}  // namespace stokesbgg

#endif
