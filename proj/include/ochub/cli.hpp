#pragma once

#include <iosfwd>

namespace ochub::cli {

enum ExitCode : int {
  kOk = 0,
  kQualityFailure = 1,
  kUsage = 2,
  kIoError = 3,
  kConflict = 4,
};

/// Runs one command line; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace ochub::cli
