#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qosbroker/matchmaking.hpp"
#include "qosbroker/model.hpp"
#include "qosbroker/registry.hpp"

// Structured-text documents shared by the store file, the HTTP bodies and the
// CLI input files. Readers are strict: unknown fields raise UnknownField, wrong
// shapes raise MalformedDocument.
namespace qosbroker {

using Json = nlohmann::json;

inline constexpr std::string_view kStoreVersion = "1";

/// Throws MalformedDocument on a syntax error.
Json parse_document(std::string_view text);

Json schema_to_json(const QosSchema& schema);
QosSchema schema_from_json(const Json& doc);

Json record_to_json(const ServiceRecord& record);
/// Shape checks only; schema validation happens at registration.
ServiceRecord record_from_json(const Json& doc);

Json request_to_json(const MatchRequest& request);
MatchRequest request_from_json(const Json& doc);

/// Distances appear twice: `distance` rounded to 4 decimals for display and
/// `distance_raw` at full precision.
Json result_to_json(const MatchResult& result, const std::optional<std::string>& feedback = {});
MatchResult result_from_json(const Json& doc);

Json store_to_json(const RegistryStore& store);
RegistryStore store_from_json(const Json& doc);

/// {"schemes": [{"name": ..., "weights": {...}}, ...]}
std::vector<WeightScheme> schemes_from_json(const Json& doc);

double round4(double x);

}  // namespace qosbroker
