#include "qosbroker/normalization.hpp"

#include <algorithm>

#include "qosbroker/error.hpp"

namespace qosbroker {

double normalize_minimize(double value, const ColumnStats& stats) {
  return (stats.max - value) / (stats.max - stats.min);
}

double normalize_maximize(double value, const ColumnStats& stats) {
  return (value - stats.min) / (stats.max - stats.min);
}

double normalize_value(double value, const ColumnStats& stats, Direction direction) {
  if (stats.degenerate) return 1.0;
  const double clamped = std::clamp(value, stats.min, stats.max);
  return direction == Direction::Minimize ? normalize_minimize(clamped, stats)
                                          : normalize_maximize(clamped, stats);
}

std::vector<ColumnStats> column_stats(const QualityMatrix& matrix) {
  std::vector<ColumnStats> stats(matrix.cols());
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    auto& s = stats[c];
    s.property = matrix.schema()[c].name;
    bool any = false;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      const auto& cell = matrix.at(r, c);
      if (!cell) continue;
      if (!any) {
        s.min = s.max = *cell;
        any = true;
      } else {
        s.min = std::min(s.min, *cell);
        s.max = std::max(s.max, *cell);
      }
    }
    s.degenerate = !any || s.min == s.max;
  }
  return stats;
}

NormalizedMatrix::NormalizedMatrix(QosSchema schema, std::vector<std::string> service_ids,
                                   std::vector<double> values, std::vector<ColumnStats> stats)
    : schema_(std::move(schema)),
      ids_(std::move(service_ids)),
      values_(std::move(values)),
      stats_(std::move(stats)) {
  if (values_.size() != ids_.size() * schema_.size() || stats_.size() != schema_.size())
    throw Error(Errc::LengthMismatch, "", "normalized matrix shape mismatch");
}

NormalizedMatrix normalize_matrix(const QualityMatrix& matrix) {
  auto stats = column_stats(matrix);
  std::vector<double> values(matrix.rows() * matrix.cols());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      const auto& cell = matrix.at(r, c);
      values[r * matrix.cols() + c] =
          cell ? normalize_value(*cell, stats[c], matrix.schema()[c].direction) : 0.0;
    }
  }
  return NormalizedMatrix(matrix.schema(), matrix.service_ids(), std::move(values),
                          std::move(stats));
}

std::vector<double> normalize_request(const QosProfile& requirements,
                                      const std::vector<ColumnStats>& stats,
                                      const QosSchema& schema) {
  if (stats.size() != schema.size())
    throw Error(Errc::LengthMismatch, "", "column stats do not match the schema");
  std::vector<double> out;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (auto v = requirements.get(schema[c].name))
      out.push_back(normalize_value(*v, stats[c], schema[c].direction));
  }
  return out;
}

}  // namespace qosbroker
