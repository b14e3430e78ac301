#pragma once

#include <iosfwd>

namespace slag::cli {

/// Entry point of the `slag` command-line tool. Exit codes: 0 success,
/// 1 failed verification or numerical failure, 2 invalid input, 3 convergence failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slag::cli
