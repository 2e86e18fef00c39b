#pragma once

#include <iosfwd>

namespace lgol::cli {

// Runs one `lgol` invocation. Returns 0 on success, 1 on data errors and 2
// on usage errors (the synopsis goes to `err`).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lgol::cli
