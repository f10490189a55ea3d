#pragma once

#include <iosfwd>

namespace bladeinspect::cli {

/// Entry point shared by the executable and the tests. Subcommands: gen,
/// features, evaluate, cluster. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bladeinspect::cli
