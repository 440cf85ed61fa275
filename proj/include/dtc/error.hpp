#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtc {

enum class ErrorKind {
  MissingColumn,
  BadLabel,
  BadField,
  EmptyText,
  DegenerateClass,
  IoFailure,
  UnknownStopwordList,
  EmptyVocabulary,
  SingleClass,
  DimensionMismatch,
  NegativeFeature,
  LengthMismatch,
  Empty,
  UnsupportedVersion,
  CorruptFile,
  SchemaMismatch,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dtc
