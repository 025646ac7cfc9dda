#include "qosbroker/matchmaking.hpp"

#include <algorithm>
#include <cmath>

#include "qosbroker/error.hpp"

namespace qosbroker {

const RankedService* MatchResult::find(std::string_view id) const {
  auto it = std::find_if(ranking.begin(), ranking.end(),
                         [&](const RankedService& r) { return r.id == id; });
  return it == ranking.end() ? nullptr : &*it;
}

double weighted_distance(std::span<const double> a, std::span<const double> b,
                         std::span<const double> w) {
  if (a.size() != b.size() || a.size() != w.size())
    throw Error(Errc::LengthMismatch, "", "distance operands differ in length");
  double sum = 0.0;
  for (std::size_t h = 0; h < a.size(); ++h) {
    const double d = a[h] - b[h];
    sum += w[h] * d * d;
  }
  return std::sqrt(sum);
}

namespace {

struct Scored {
  double distance;
  std::size_t row;
};

MatchResult unranked(std::span<const ServiceRecord> candidates, const MatchRequest& request) {
  MatchResult out;
  out.ranked = false;
  for (const auto& svc : candidates) {
    if (out.ranking.size() == request.top_k) break;
    if (svc.profile_for(request.mode) == nullptr) continue;
    out.ranking.push_back({svc.id, 0.0, {}});
  }
  if (candidates.empty()) throw Error(Errc::NoCandidates, "", "no candidate services to rank");
  if (out.ranking.empty())
    throw Error(Errc::UnknownMode, request.mode,
                "no candidate declares mode '" + request.mode + "' or a default profile");
  return out;
}

}  // namespace

MatchResult match(const MatchRequest& request, std::span<const ServiceRecord> candidates,
                  const QosSchema& schema, MatchOptions options) {
  validate_request(request, schema);

  auto requested =
      schema.filtered([&](const QosPropertyDef& d) { return request.requirements.get(d.name); });
  if (!requested) return unranked(candidates, request);

  const QualityMatrix raw = build_quality_matrix(candidates, *requested, request.mode);
  NormalizedMatrix norm = normalize_matrix(raw);
  const std::vector<double> target = normalize_request(request.requirements, norm.stats(), *requested);
  const std::vector<double> weights = resolve_weights(request, *requested);

  const std::size_t n = norm.rows();
  const auto& ids = norm.service_ids();
  std::vector<Scored> scored(n);
  for (std::size_t i = 0; i < n; ++i) scored[i] = {weighted_distance(target, norm.row(i), weights), i};

  const std::size_t keep = std::min(request.top_k, n);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), [&](const Scored& x, const Scored& y) {
                      if (x.distance != y.distance) return x.distance < y.distance;
                      return ids[x.row] < ids[y.row];
                    });

  std::vector<RankedService> all;
  all.reserve(keep);
  for (std::size_t j = 0; j < keep; ++j) {
    const auto row = norm.row(scored[j].row);
    RankedService r{ids[scored[j].row], scored[j].distance, {}};
    r.contributions.reserve(requested->size());
    for (std::size_t h = 0; h < requested->size(); ++h) {
      const double d = target[h] - row[h];
      r.contributions.push_back({(*requested)[h].name, target[h], row[h], weights[h],
                                 weights[h] * d * d});
    }
    all.push_back(std::move(r));
  }

  MatchResult out;
  out.ranking = std::move(all);
  if (options.echo_matrix) out.matrix_echo = std::move(norm);
  return out;
}

const std::vector<DimensionContribution>& explain(const MatchResult& result, std::string_view id) {
  const RankedService* r = result.find(id);
  if (r == nullptr)
    throw Error(Errc::UnknownServiceId, std::string(id),
                "service '" + std::string(id) + "' is not in the match result");
  return r->contributions;
}

bool SchemeComparison::any_winner_changed() const {
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [](const SchemeOutcome& o) { return o.winner_changed; });
}

SchemeComparison compare_schemes(const MatchRequest& base, std::span<const WeightScheme> schemes,
                                 std::span<const ServiceRecord> candidates,
                                 const QosSchema& schema) {
  SchemeComparison cmp;
  for (const auto& scheme : schemes) {
    MatchRequest req = base;
    req.weights = scheme.weights;
    req.top_k = std::max<std::size_t>(candidates.size(), 1);
    SchemeOutcome o{scheme.name, match(req, candidates, schema), false};
    if (!cmp.outcomes.empty()) {
      const auto* first = cmp.outcomes.front().result.winner();
      const auto* mine = o.result.winner();
      o.winner_changed = (first == nullptr) != (mine == nullptr) ||
                         (first != nullptr && mine != nullptr && first->id != mine->id);
    }
    cmp.outcomes.push_back(std::move(o));
  }
  return cmp;
}

}  // namespace qosbroker
