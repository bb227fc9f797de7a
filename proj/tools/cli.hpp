#pragma once

#include <iosfwd>

namespace warplda::cli {

/// Entry point of the `warplda` tool. Commands: train, eval, partition-bench,
/// topics. Returns the process exit status; diagnostics go to `err` as one
/// line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace warplda::cli
