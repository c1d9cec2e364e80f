#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixgeom {

enum class ErrorCode {
  NotHermitian,
  InvalidState,
  AmbiguousClustering,
  TypeMismatch,
  NotTangent,
  TypeChanged,
  StepTooLarge,
  Diagnostics,
  InvalidSetup,
  GaplessPoint,
  GaplessParameter,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the scan driver, the Python bindings) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixgeom
