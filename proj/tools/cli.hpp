#pragma once

#include <iosfwd>

namespace thermolens {

// Exit codes: 0 success, 1 usage or validation error, 2 solver failure
// (degeneracy, non-convergence), 3 I/O error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thermolens
