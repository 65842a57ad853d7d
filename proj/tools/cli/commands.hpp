#pragma once

#include <iosfwd>

namespace hypdir::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadInput = 2,
  kNotConverged = 3,
  kGeneratorNotFace = 4,
  kExplosionGuard = 5,
  kInsufficientRadius = 6,
  kVerificationFailed = 7,
};

/// Entry point of the hypdir tool: subcommands build, spectrum, check-words
/// and roundtrip.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypdir::cli
