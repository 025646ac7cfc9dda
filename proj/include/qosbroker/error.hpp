#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qosbroker {

/// Stable machine-readable error codes. The string form is part of the
/// HTTP and CLI contract and must not change between releases.
enum class Errc {
  EmptySchema,
  EmptyName,
  DuplicateName,
  UnknownProperty,
  NonFiniteValue,
  OutOfRangeWeight,
  UnrequestedWeight,
  InvalidTopK,
  NoCandidates,
  UnknownMode,
  LengthMismatch,
  UnknownServiceId,
  EmptyId,
  DuplicateId,
  UnknownId,
  NoProfiles,
  IoFailure,
  MalformedDocument,
  SchemaMismatch,
  UnknownField,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string subject, const std::string& message)
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  Errc code() const noexcept { return code_; }
  /// The offending entity (property name, service id, path, ...). May be empty.
  const std::string& subject() const noexcept { return subject_; }

 private:
  Errc code_;
  std::string subject_;
};

}  // namespace qosbroker
