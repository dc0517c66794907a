#pragma once

#include <iosfwd>

namespace nlmc {

/// Exit codes: 0 success, 1 usage or configuration error, 2 solver failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlmc
