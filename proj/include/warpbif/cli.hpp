#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "warpbif/config.hpp"

namespace warpbif {

enum ExitCode : int {
  kExitOk = 0,
  kExitHypothesisViolated = 2,
  kExitNumericalFailure = 3,
  kExitConfigError = 4,
};

struct CliRequest {
  std::string command;
  std::string config_path;
  /// Artifacts go here when set; otherwise the main JSON goes to `out`.
  std::optional<std::string> out_dir;
  ConfigOverrides overrides;
};

/// Commands: torus-spectrum, weight, warped-spectrum, check-hypothesis, scan,
/// family-scan. Diagnostics go to `err`, verbosity from WARPBIF_LOG
/// (quiet | info | debug, or 0 | 1 | 2).
int run(const CliRequest& request, std::ostream& out, std::ostream& err);

/// Same as run() with the config document already in memory.
int run_document(const CliRequest& request, const std::string& config_text, std::ostream& out,
                 std::ostream& err);

}  // namespace warpbif
