#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fluxlab {

enum class ErrorKind {
  DimensionTooSmall,
  SizeExceedsCap,
  InvalidPath,
  InvalidArgument,
  NotBlockDiagonal,
  NotHermitian,
  EigensolverFailure,
  DegenerateToleranceAmbiguity,
  UnknownLabel,
  UnknownKind,
  ParseError,
  UnknownKey,
  ConstraintViolation,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every recoverable failure in the library is reported through this type;
/// `kind()` lets callers and tests branch on the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fluxlab
