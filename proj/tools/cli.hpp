#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mkepler::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 2,
  kIntegrationAbort = 3,  // Dirac string, collision, step underflow
  kBoundExceeded = 4,     // drift or residual above the configured bound
  kMembership = 5,
};

/// Default directory for relative output paths.
inline constexpr const char* kOutputDirVariable = "MKEPLER_OUTPUT_DIR";

/// Runs one command line (without the program name). JSON payloads go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mkepler::cli
