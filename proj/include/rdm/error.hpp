#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdm {

enum class Errc {
  MalformedHeader,
  ArityMismatch,
  NonFiniteValue,
  UnknownCategory,
  RowCountMismatch,
  BadSampleSize,
  UnknownAttribute,
  ViewIndexOutOfRange,
  InvalidQuery,
  QueryParse,
  UniverseMismatch,
  EmptySupport,
  EmptySample,
  LengthMismatch,
  DegenerateVariance,
  NonNumericAttribute,
  EmptyView,
  TargetLengthMismatch,
  SameView,
  ViewAlreadyPresent,
  ConfigInvalid,
  DatasetTooSmall,
  BadFoldCount,
  DuplicateKey,
  TypeError,
  MissingRequired,
  Io,
  InvariantViolation,
};

std::string_view to_string(Errc code) noexcept;

/// Every recoverable failure in the library is reported as an `Error`
/// carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rdm
