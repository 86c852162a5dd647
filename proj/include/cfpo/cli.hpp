#pragma once

#include <string>
#include <vector>

namespace cfpo::cli {

/// Runs one subcommand. Exit codes: 0 success / property holds, 1 property
/// fails, 2 input or usage error, 3 budget exceeded.
int run(const std::vector<std::string>& args);

} // namespace cfpo::cli
