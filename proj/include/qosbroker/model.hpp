#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qosbroker {

/// Whether lower (MINIMIZE) or higher (MAXIMIZE) raw values are better.
enum class Direction { Minimize, Maximize };

std::string_view to_string(Direction d) noexcept;

struct QosPropertyDef {
  std::string name;
  Direction direction = Direction::Minimize;
  std::string unit;

  bool operator==(const QosPropertyDef&) const = default;
};

/// Ordered, validated set of QoS properties. The order fixes the column order
/// of every matrix and vector derived from it.
class QosSchema {
 public:
  /// Throws Error{EmptySchema | EmptyName | DuplicateName}.
  explicit QosSchema(std::vector<QosPropertyDef> defs);

  std::size_t size() const noexcept { return defs_.size(); }
  const QosPropertyDef& operator[](std::size_t i) const { return defs_[i]; }
  const std::vector<QosPropertyDef>& properties() const noexcept { return defs_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  /// Direction flags, 0 = minimize, 1 = maximize.
  std::vector<int> direction_flags() const;

  /// Sub-schema keeping only properties for which `keep` is true, in order.
  template <class Pred>
  std::optional<QosSchema> filtered(Pred keep) const {
    std::vector<QosPropertyDef> kept;
    for (const auto& d : defs_)
      if (keep(d)) kept.push_back(d);
    if (kept.empty()) return std::nullopt;
    return QosSchema(std::move(kept));
  }

  bool operator==(const QosSchema&) const = default;

 private:
  std::vector<QosPropertyDef> defs_;
};

QosSchema validate_schema(std::vector<QosPropertyDef> defs);

/// Property name -> raw value. Absent keys are missing values.
struct QosProfile {
  std::map<std::string, double, std::less<>> values;

  std::optional<double> get(std::string_view property) const;
  bool empty() const noexcept { return values.empty(); }

  bool operator==(const QosProfile&) const = default;
};

/// Throws UnknownProperty or NonFiniteValue.
void validate_profile(const QosProfile& profile, const QosSchema& schema);

inline constexpr std::string_view kDefaultMode = "default";

struct ServiceRecord {
  std::string id;
  std::string display_name;
  std::set<std::string> functional_tags;
  std::map<std::string, QosProfile, std::less<>> profiles;

  /// Profile for `mode`, falling back to the "default" profile.
  const QosProfile* profile_for(std::string_view mode) const;

  bool operator==(const ServiceRecord&) const = default;
};

/// Lowercases tags and checks id, profiles and every profile against schema.
ServiceRecord validate_record(ServiceRecord record, const QosSchema& schema);

std::set<std::string> normalize_tags(const std::set<std::string>& tags);

struct MatchRequest {
  std::set<std::string> functional_tags;
  std::string mode = std::string(kDefaultMode);
  QosProfile requirements;
  std::map<std::string, double, std::less<>> weights;
  std::size_t top_k = 1;
};

/// Checks every key against the schema, value finiteness, weight bounds and
/// top_k. Weights are checked with the same rules as resolve_weights.
void validate_request(const MatchRequest& request, const QosSchema& schema);

/// Weights over the requested properties in schema order; unspecified
/// weights default to 1.0.
std::vector<double> resolve_weights(const MatchRequest& request, const QosSchema& schema);

/// Raw n x k values; rows are candidates in registration order, columns follow
/// the schema.
class QualityMatrix {
 public:
  QualityMatrix(QosSchema schema, std::vector<std::string> service_ids,
                std::vector<std::optional<double>> cells);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t cols() const noexcept { return schema_.size(); }
  const QosSchema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& service_ids() const noexcept { return ids_; }

  const std::optional<double>& at(std::size_t row, std::size_t col) const {
    return cells_[row * cols() + col];
  }

 private:
  QosSchema schema_;
  std::vector<std::string> ids_;
  std::vector<std::optional<double>> cells_;
};

/// Candidates without the requested mode or "default" are dropped.
/// Throws NoCandidates for empty input, UnknownMode when every candidate was
/// dropped by the mode filter.
QualityMatrix build_quality_matrix(std::span<const ServiceRecord> candidates,
                                   const QosSchema& schema, std::string_view mode);

}  // namespace qosbroker
