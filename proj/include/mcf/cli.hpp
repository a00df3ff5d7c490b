#pragma once

#include <iosfwd>

namespace mcf {

/// Command-line entry point. Exit codes: 0 success, 1 numeric/domain failure, 2 usage error.
/// Failures print "error[<category>]: <message>" on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcf
