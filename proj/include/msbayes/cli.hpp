#pragma once

#include <string>
#include <vector>

namespace msbayes {

/// Command dispatch for the msbayes tool. Subcommands: simulate, fit,
/// predict, decompose, compare. Returns 0 on success, 1 on validation
/// errors, 2 on numerical failures, 64 on usage errors.
int run_command(int argc, const char* const* argv);
int run_command(const std::vector<std::string>& args);

}  // namespace msbayes
