#pragma once

#include <ostream>

namespace superlattice::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

// Parses arguments, runs one subcommand, writes its outputs and manifest.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace superlattice::cli
