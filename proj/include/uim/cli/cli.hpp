#pragma once

#include <ostream>

namespace uim::cli {

/// Entry point of the `uim` tool. Returns the process exit code:
/// 0 success, 1 operation failed, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uim::cli
