#pragma once

#include <iosfwd>

namespace fracstep {

/// Exit codes: 0 success, 1 usage or input error, 2 computation error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracstep
