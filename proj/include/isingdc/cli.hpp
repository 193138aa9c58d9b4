#pragma once

#include <iosfwd>

namespace isingdc {

/// Command-line entry point. Returns 0 on success, 1 on usage errors and 2
/// on runtime failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isingdc
