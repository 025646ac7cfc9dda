#include "qosbroker/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "qosbroker/error.hpp"

namespace qosbroker {

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Minimize ? "min" : "max";
}

QosSchema::QosSchema(std::vector<QosPropertyDef> defs) : defs_(std::move(defs)) {
  if (defs_.empty()) throw Error(Errc::EmptySchema, "", "schema must define at least one property");
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < defs_.size(); ++i) {
    const auto& name = defs_[i].name;
    if (name.empty())
      throw Error(Errc::EmptyName, std::to_string(i),
                  "property #" + std::to_string(i) + " has an empty name");
    if (!seen.insert(name).second)
      throw Error(Errc::DuplicateName, name, "duplicate property name '" + name + "'");
  }
}

std::optional<std::size_t> QosSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < defs_.size(); ++i)
    if (defs_[i].name == name) return i;
  return std::nullopt;
}

std::vector<int> QosSchema::direction_flags() const {
  std::vector<int> nr;
  nr.reserve(defs_.size());
  for (const auto& d : defs_) nr.push_back(d.direction == Direction::Maximize ? 1 : 0);
  return nr;
}

QosSchema validate_schema(std::vector<QosPropertyDef> defs) { return QosSchema(std::move(defs)); }

std::optional<double> QosProfile::get(std::string_view property) const {
  auto it = values.find(property);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

void validate_profile(const QosProfile& profile, const QosSchema& schema) {
  for (const auto& [name, value] : profile.values) {
    if (!schema.contains(name))
      throw Error(Errc::UnknownProperty, name, "property '" + name + "' is not in the schema");
    if (!std::isfinite(value))
      throw Error(Errc::NonFiniteValue, name, "value for '" + name + "' is not finite");
  }
}

const QosProfile* ServiceRecord::profile_for(std::string_view mode) const {
  if (auto it = profiles.find(mode); it != profiles.end()) return &it->second;
  if (auto it = profiles.find(kDefaultMode); it != profiles.end()) return &it->second;
  return nullptr;
}

std::set<std::string> normalize_tags(const std::set<std::string>& tags) {
  std::set<std::string> out;
  for (std::string t : tags) {
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.insert(std::move(t));
  }
  return out;
}

ServiceRecord validate_record(ServiceRecord record, const QosSchema& schema) {
  if (record.id.empty()) throw Error(Errc::EmptyId, "", "service id must not be empty");
  if (record.profiles.empty())
    throw Error(Errc::NoProfiles, record.id, "service '" + record.id + "' declares no QoS profile");
  for (const auto& [mode, profile] : record.profiles) {
    try {
      validate_profile(profile, schema);
    } catch (const Error& e) {
      throw Error(e.code(), record.id,
                  "service '" + record.id + "', mode '" + mode + "': " + e.what());
    }
  }
  record.functional_tags = normalize_tags(record.functional_tags);
  return record;
}

namespace {

void check_weights(const MatchRequest& request, const QosSchema& schema) {
  for (const auto& [name, w] : request.weights) {
    if (!schema.contains(name))
      throw Error(Errc::UnknownProperty, name, "weight names unknown property '" + name + "'");
    if (!request.requirements.get(name))
      throw Error(Errc::UnrequestedWeight, name,
                  "weight given for '" + name + "' which is not among the requirements");
    if (!(w > 0.0 && w <= 1.0))
      throw Error(Errc::OutOfRangeWeight, name, "weight for '" + name + "' must lie in (0, 1]");
  }
}

}  // namespace

void validate_request(const MatchRequest& request, const QosSchema& schema) {
  validate_profile(request.requirements, schema);
  check_weights(request, schema);
  if (request.top_k == 0) throw Error(Errc::InvalidTopK, "", "top_k must be a positive integer");
}

std::vector<double> resolve_weights(const MatchRequest& request, const QosSchema& schema) {
  check_weights(request, schema);
  std::vector<double> out;
  for (const auto& def : schema.properties()) {
    if (!request.requirements.get(def.name)) continue;
    auto it = request.weights.find(def.name);
    out.push_back(it == request.weights.end() ? 1.0 : it->second);
  }
  return out;
}

QualityMatrix::QualityMatrix(QosSchema schema, std::vector<std::string> service_ids,
                             std::vector<std::optional<double>> cells)
    : schema_(std::move(schema)), ids_(std::move(service_ids)), cells_(std::move(cells)) {
  if (cells_.size() != ids_.size() * schema_.size())
    throw Error(Errc::LengthMismatch, "", "quality matrix cell count does not match its shape");
}

QualityMatrix build_quality_matrix(std::span<const ServiceRecord> candidates,
                                   const QosSchema& schema, std::string_view mode) {
  if (candidates.empty()) throw Error(Errc::NoCandidates, "", "no candidate services to rank");
  const std::size_t k = schema.size();
  std::vector<std::string> ids;
  std::vector<std::optional<double>> cells;
  ids.reserve(candidates.size());
  cells.reserve(candidates.size() * k);
  for (const auto& svc : candidates) {
    const QosProfile* profile = svc.profile_for(mode);
    if (profile == nullptr) continue;
    ids.push_back(svc.id);
    for (const auto& def : schema.properties()) cells.push_back(profile->get(def.name));
  }
  if (ids.empty())
    throw Error(Errc::UnknownMode, std::string(mode),
                "no candidate declares mode '" + std::string(mode) + "' or a default profile");
  return QualityMatrix(schema, std::move(ids), std::move(cells));
}

}  // namespace qosbroker
