#pragma once

#include <iosfwd>

namespace suppkg::cli {

/// Runs one subcommand. Returns 0 on success, 1 on a data or validation
/// error and 2 on a usage error. Summary lines go to `out`, diagnostics
/// (one JSON record per error) to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace suppkg::cli
