#pragma once

#include <ostream>

namespace ais::harness {

/// ais-kit entry point.
///
///   ais-kit negsel|clonal|idionet|dca --config FILE [--seed N] [--out DIR]
///   ais-kit generate NAME [--seed N] --out DIR
///   ais-kit evaluate PREDICTIONS TRUTH [--out DIR]
///
/// Exit codes: 0 success, 1 runtime error, 2 usage or configuration error.
/// Diagnostics go to `err`; AIS_KIT_LOG in {quiet, info, trace} sets the log level.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ais::harness
