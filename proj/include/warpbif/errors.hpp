#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpbif {

enum class ErrorCode {
  kInvalidArgument,
  kSingularBasis,
  kCutoffTooLarge,
  kDegeneratePath,
  kInvalidEps,
  kModeTooLarge,
  kNonPositiveCurvature,
  kGroundStateSignFailure,
  kSolverFailure,
  kNoNondegenerateEndpoint,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace warpbif
