#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qosbroker/model.hpp"
#include "qosbroker/normalization.hpp"

namespace qosbroker {

struct DimensionContribution {
  std::string property;
  double request_norm = 0.0;
  double service_norm = 0.0;
  double weight = 0.0;
  /// weight * (request_norm - service_norm)^2
  double contribution = 0.0;

  bool operator==(const DimensionContribution&) const = default;
};

struct RankedService {
  std::string id;
  double distance = 0.0;
  std::vector<DimensionContribution> contributions;

  bool operator==(const RankedService&) const = default;
};

struct MatchResult {
  /// Ascending distance, ties by ascending id. Registration order when
  /// `ranked` is false.
  std::vector<RankedService> ranking;
  /// False when the request carried no QoS requirement at all.
  bool ranked = true;
  std::optional<NormalizedMatrix> matrix_echo;

  const RankedService* find(std::string_view id) const;
  const RankedService* winner() const { return ranking.empty() ? nullptr : &ranking.front(); }
};

/// sqrt(sum_h w_h * (a_h - b_h)^2). Throws LengthMismatch.
double weighted_distance(std::span<const double> a, std::span<const double> b,
                         std::span<const double> w);

struct MatchOptions {
  bool echo_matrix = false;
};

/// Ranks already functionally-filtered candidates by weighted distance
/// between normalized profiles and the normalized requirement. Only the
/// requested properties take part. Linear in the number of candidates.
MatchResult match(const MatchRequest& request, std::span<const ServiceRecord> candidates,
                  const QosSchema& schema, MatchOptions options = {});

/// Per-dimension breakdown for one ranked service. Throws UnknownServiceId.
const std::vector<DimensionContribution>& explain(const MatchResult& result, std::string_view id);

struct WeightScheme {
  std::string name;
  std::map<std::string, double, std::less<>> weights;
};

struct SchemeOutcome {
  std::string name;
  MatchResult result;
  /// Winner id differs from the first scheme's winner.
  bool winner_changed = false;
};

struct SchemeComparison {
  std::vector<SchemeOutcome> outcomes;
  bool any_winner_changed() const;
};

/// One full ranking per scheme over the same candidate snapshot. The base
/// request's weights are replaced by each scheme's weights; top_k is ignored.
SchemeComparison compare_schemes(const MatchRequest& base, std::span<const WeightScheme> schemes,
                                 std::span<const ServiceRecord> candidates,
                                 const QosSchema& schema);

}  // namespace qosbroker
