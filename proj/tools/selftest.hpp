#pragma once

#include <iosfwd>

namespace hjp::cli {

/// Prints one PASS/FAIL line per suite and a summary; returns the failures.
int run_selftest(std::ostream& out, int jobs);

}  // namespace hjp::cli
