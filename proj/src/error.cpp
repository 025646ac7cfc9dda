#include "qosbroker/error.hpp"

namespace qosbroker {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptySchema: return "empty-schema";
    case Errc::EmptyName: return "empty-name";
    case Errc::DuplicateName: return "duplicate-name";
    case Errc::UnknownProperty: return "unknown-property";
    case Errc::NonFiniteValue: return "non-finite-value";
    case Errc::OutOfRangeWeight: return "out-of-range-weight";
    case Errc::UnrequestedWeight: return "unrequested-weight";
    case Errc::InvalidTopK: return "invalid-top-k";
    case Errc::NoCandidates: return "no-candidates";
    case Errc::UnknownMode: return "unknown-mode";
    case Errc::LengthMismatch: return "length-mismatch";
    case Errc::UnknownServiceId: return "unknown-service-id";
    case Errc::EmptyId: return "empty-id";
    case Errc::DuplicateId: return "duplicate-id";
    case Errc::UnknownId: return "unknown-id";
    case Errc::NoProfiles: return "no-profiles";
    case Errc::IoFailure: return "io-failure";
    case Errc::MalformedDocument: return "malformed-document";
    case Errc::SchemaMismatch: return "schema-mismatch";
    case Errc::UnknownField: return "unknown-field";
  }
  return "unknown";
}

}  // namespace qosbroker
