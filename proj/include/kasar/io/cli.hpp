#pragma once

#include <iosfwd>

namespace kasar::io {

/// Exit status: 0 success, 2 usage / config / format errors (including kind mismatch), 1 otherwise.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kasar::io
